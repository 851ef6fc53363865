#pragma once

#include <string>

#include "json.hpp"

#include "rvib/config.hpp"

namespace rvib {

inline constexpr const char* version = "0.1.0";

struct RunOutcome {
    std::string primary_path;
    std::string sidecar_path;  ///< empty when no sidecar is written
    std::vector<std::string> warnings;
};

/// Each runner computes everything first and only then writes its files, so a failure
/// leaves no partial output.
RunOutcome run_modes(const RunConfig& config);
RunOutcome run_spectrum(const RunConfig& config);
RunOutcome run_rfscan(const RunConfig& config);
RunOutcome run_evolve(const RunConfig& config);
RunOutcome run(const RunConfig& config);

/// printf-style %.10e, used for every floating column except the mode table.
std::string format_double(double value);

}  // namespace rvib
