#include "rvib/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rvib/crystal.hpp"
#include "rvib/error.hpp"
#include "rvib/scan.hpp"
#include "rvib/spectrum.hpp"

namespace rvib {

using nlohmann::json;

std::string format_double(double value) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10e", value);
    return buf;
}

namespace {

void write_file(const std::string& path, const std::string& contents) {
    if (path.empty()) throw ConfigError("no output path given (use --out or \"output\")");
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << contents;
    if (!out) throw ConfigError("failed writing '" + path + "'");
}

std::vector<std::string> trap_warnings(const RunConfig& config) {
    std::vector<std::string> w;
    if (config.trap && config.trap->resolve().zigzag_warning()) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "anisotropy %.3g is at or above the zigzag threshold %.3g for N=%d; the "
                      "linear-chain modes may not apply",
                      *config.trap->anisotropy, config.trap->resolve().critical_anisotropy(),
                      config.trap->ion_count);
        w.push_back(msg);
    }
    return w;
}

json params_json(const ModelParams& p) {
    json modes = json::array();
    for (const auto& m : p.modes)
        modes.push_back({{"p", m.label}, {"frequency", m.frequency}, {"coupling", m.coupling}});
    return {{"interaction", p.interaction}, {"detuning", p.detuning}, {"modes", modes}};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

RunOutcome run_modes(const RunConfig& config) {
    RunOutcome out;
    for (int n : config.ion_counts)
        if (n == 1) out.warnings.push_back("N=1 has no interacting pair; only the COM row is listed");
    const std::string csv = mode_table_csv(mode_table(config.ion_counts));
    auto w = trap_warnings(config);
    out.warnings.insert(out.warnings.end(), w.begin(), w.end());
    write_file(config.output, csv);
    out.primary_path = config.output;
    return out;
}

RunOutcome run_spectrum(const RunConfig& config) {
    RunOutcome out;
    out.warnings = trap_warnings(config);
    const ModelParams params = config.model_params();
    const HilbertSpace space(config.fock_cutoffs(params));
    SweepOptions options;
    options.threads = config.resolved_threads();
    const auto sweep = sweep_spectrum(params, space, config.rabi.values(), options);
    if (!sweep.complete_spectrum)
        out.warnings.push_back("space too large for dense diagonalization; only energy windows "
                               "around the facilitation manifold and the ground state are listed");
    write_file(config.output, sweep_csv(sweep));
    out.primary_path = config.output;
    return out;
}

RunOutcome run_rfscan(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    RunOutcome out;
    out.warnings = trap_warnings(config);
    const ModelParams params = config.model_params();
    const double w_ref = params.reference_frequency();

    ScanRequest req;
    req.params = params;
    req.cutoffs = config.fock_cutoffs(params);
    req.rabi_grid = config.rabi.values();
    req.rf_grid = config.rf_values(params);
    req.rf_amplitude = config.rf_amplitude;
    req.temperature = config.temperature;
    req.thermal_epsilon = config.thermal_epsilon;
    req.thermal_margin = config.thermal_margin;
    req.duration = config.tau / w_ref;
    req.evolve.step = config.step / w_ref;
    req.evolve.keep_final_state = false;
    req.initial = config.initial;
    req.threads = config.resolved_threads();
    const ScanResult result = rf_scan(req);

    json side;
    side["version"] = version;
    side["config"] = config.to_json();
    side["resolved_params"] = params_json(params);
    side["grids"] = {{"omega", result.rabi_grid}, {"omega_rf", result.rf_grid}};
    side["space_dim"] = result.space_dim;
    side["ensemble_size"] = result.ensemble_size;
    side["duration"] = req.duration;
    side["step"] = req.evolve.step;
    side["warnings"] = out.warnings;
    side["wall_time_s"] = seconds_since(start);

    out.primary_path = config.output;
    out.sidecar_path = config.output + ".json";
    const std::string csv = scan_csv(result);
    write_file(out.primary_path, csv);
    write_file(out.sidecar_path, side.dump(2) + "\n");
    return out;
}

RunOutcome run_evolve(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    RunOutcome out;
    out.warnings = trap_warnings(config);
    const ModelParams params = config.model_params();
    const double w_ref = params.reference_frequency();
    const ThermalEnsemble ensemble =
        thermal_ensemble(params, config.temperature, config.thermal_epsilon);
    FockCutoffs cutoffs = config.fock_cutoffs(params);
    if (config.temperature > 0.0) cutoffs = thermal_cutoffs(ensemble, cutoffs, config.thermal_margin);
    const HilbertSpace space(cutoffs);

    const double rabi = config.rabi.min;
    const double rf = config.rf_values(params).front();
    const Propagator prop(space, params, rabi);
    EvolveOptions opts;
    opts.step = config.step / w_ref;
    opts.keep_final_state = false;

    std::vector<double> times, rydberg;
    double signal = 0.0;
    for (const auto& member : ensemble.members) {
        const auto psi = initial_state(space, params, rabi, member.occupations, config.initial);
        const auto tr = prop.evolve(config.rf_amplitude, rf, psi, config.tau / w_ref, opts);
        if (times.empty()) {
            times = tr.times;
            rydberg.assign(tr.rydberg.size(), 0.0);
        }
        for (std::size_t k = 0; k < rydberg.size(); ++k) rydberg[k] += member.weight * tr.rydberg[k];
        signal += member.weight * tr.signal;
    }

    std::ostringstream csv;
    csv << "t,n_ryd\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (k % static_cast<std::size_t>(config.sample_every) != 0 && k + 1 != times.size()) continue;
        csv << format_double(times[k]) << ',' << format_double(rydberg[k]) << '\n';
    }

    json side;
    side["version"] = version;
    side["config"] = config.to_json();
    side["resolved_params"] = params_json(params);
    side["signal"] = signal;
    side["space_dim"] = space.dim();
    side["ensemble_size"] = ensemble.members.size();
    side["warnings"] = out.warnings;
    side["wall_time_s"] = seconds_since(start);

    out.primary_path = config.output;
    out.sidecar_path = config.output + ".json";
    write_file(out.primary_path, csv.str());
    write_file(out.sidecar_path, side.dump(2) + "\n");
    return out;
}

RunOutcome run(const RunConfig& config) {
    switch (config.command) {
        case Command::modes: return run_modes(config);
        case Command::spectrum: return run_spectrum(config);
        case Command::rfscan: return run_rfscan(config);
        case Command::evolve: return run_evolve(config);
    }
    throw ConfigError("unknown command");
}

}  // namespace rvib
