#include "rvib/scan.hpp"

#include <cstdio>
#include <sstream>

#include "rvib/error.hpp"
#include "rvib/parallel.hpp"

namespace rvib {

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 1) throw ConfigError("linspace: need at least one point");
    std::vector<double> out(static_cast<std::size_t>(points));
    if (points == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
    out.back() = hi;
    return out;
}

ScanResult rf_scan(const ScanRequest& request) {
    request.params.validate();
    if (request.rabi_grid.empty() || request.rf_grid.empty())
        throw ConfigError("rf scan: grids must be nonempty");
    if (!(request.duration > 0.0)) throw ConfigError("rf scan: duration must be > 0");
    if (!(request.rf_amplitude >= 0.0)) throw ConfigError("rf scan: rf amplitude must be >= 0");

    const ThermalEnsemble ensemble =
        thermal_ensemble(request.params, request.temperature, request.thermal_epsilon);
    const FockCutoffs cutoffs = request.temperature > 0.0
                                    ? thermal_cutoffs(ensemble, request.cutoffs, request.thermal_margin)
                                    : request.cutoffs;
    const HilbertSpace space(cutoffs);

    const std::size_t rows = request.rabi_grid.size();
    const std::size_t cols = request.rf_grid.size();
    std::vector<Propagator> props;
    props.reserve(rows);
    for (double rabi : request.rabi_grid) props.emplace_back(space, request.params, rabi);

    ScanResult result;
    result.rabi_grid = request.rabi_grid;
    result.rf_grid = request.rf_grid;
    result.signal.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    result.space_dim = space.dim();
    result.ensemble_size = ensemble.members.size();

    parallel_for(rows * cols, request.threads, [&](std::size_t k) {
        const std::size_t i = k / cols;
        const std::size_t j = k % cols;
        const RabiDrive drive{request.rabi_grid[i], request.rf_amplitude, request.rf_grid[j]};
        result.signal(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            thermal_signal(props[i], request.params, drive, ensemble, request.duration,
                           request.evolve, request.initial);
    });
    return result;
}

std::string scan_csv(const ScanResult& result) {
    std::ostringstream out;
    out << "omega,omega_rf,I\n";
    char line[128];
    for (std::size_t i = 0; i < result.rabi_grid.size(); ++i)
        for (std::size_t j = 0; j < result.rf_grid.size(); ++j) {
            std::snprintf(line, sizeof line, "%.10e,%.10e,%.10e\n", result.rabi_grid[i],
                          result.rf_grid[j],
                          result.signal(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            out << line;
        }
    return out.str();
}

}  // namespace rvib
