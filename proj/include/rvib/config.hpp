#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rvib/crystal.hpp"
#include "rvib/dynamics.hpp"
#include "rvib/model.hpp"

namespace rvib {

enum class Command { modes, spectrum, rfscan, evolve };

Command parse_command(const std::string& name);
std::string command_name(Command command);

/// Either a single value (points == 1) or an inclusive uniform range.
struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int points = 1;

    std::vector<double> values() const;
};

/// Species as written in a config: preset values or explicit mass (u) and dipole (a₀).
struct SpeciesSpec {
    std::string label;
    double mass_u = 0.0;
    double dipole_a0 = 0.0;

    static SpeciesSpec preset(const std::string& name);
    IonSpecies resolve() const;
};

struct TrapSpec {
    int ion_count = 2;
    double frequency_mhz = 0.0;  ///< ν/2π
    std::optional<double> anisotropy;

    TrapConfig resolve() const;
};

/// Everything a run needs, after defaults are applied. Frequencies are in the unit of the
/// parameter source (ν for species presets, whatever the explicit parameters use otherwise);
/// tau and step are dimensionless, in units of 1/ω_ref with ω_ref the lowest coupled mode.
struct RunConfig {
    Command command = Command::rfscan;

    std::optional<SpeciesSpec> species;
    std::optional<TrapSpec> trap;
    std::optional<ModelParams> explicit_params;
    std::vector<int> ion_counts;  ///< for the modes command

    GridSpec rabi;
    double rf_amplitude = 0.1;
    GridSpec rf;
    bool rf_relative = false;  ///< rf grid given as offsets from V

    double temperature = 0.0;
    double thermal_epsilon = 1e-4;
    int thermal_margin = 8;

    std::vector<int> cutoffs;  ///< one entry applies to every mode
    double tau = 30.0;
    double step = 0.005;
    InitialState initial = InitialState::bare;
    int sample_every = 1;

    std::string output;
    int threads = 0;  ///< 0: hardware concurrency; RVIB_THREADS takes precedence when set

    /// Resolved dimensionless parameters (species conversion applied).
    ModelParams model_params() const;
    FockCutoffs fock_cutoffs(const ModelParams& params) const;
    std::vector<double> rf_values(const ModelParams& params) const;
    int resolved_threads() const;

    void validate() const;
    /// Serializes the configuration so that feeding it back reproduces the run.
    nlohmann::json to_json() const;
};

/// Parses a config document; unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& document);

/// Applies "a.b.c=value" overrides; the value is parsed as JSON when possible, else taken
/// as a string.
void apply_override(nlohmann::json& document, const std::string& assignment);

nlohmann::json load_json_file(const std::string& path);

}  // namespace rvib
