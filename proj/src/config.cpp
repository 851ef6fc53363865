#include "rvib/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>

#include "rvib/constants.hpp"
#include "rvib/error.hpp"
#include "rvib/parallel.hpp"
#include "rvib/scan.hpp"

namespace rvib {

using nlohmann::json;

Command parse_command(const std::string& name) {
    if (name == "modes") return Command::modes;
    if (name == "spectrum") return Command::spectrum;
    if (name == "rfscan") return Command::rfscan;
    if (name == "evolve") return Command::evolve;
    throw ConfigError("unknown command '" + name + "' (expected modes, spectrum, rfscan or evolve)");
}

std::string command_name(Command command) {
    switch (command) {
        case Command::modes: return "modes";
        case Command::spectrum: return "spectrum";
        case Command::rfscan: return "rfscan";
        case Command::evolve: return "evolve";
    }
    return "rfscan";
}

std::vector<double> GridSpec::values() const { return linspace(min, max, points); }

SpeciesSpec SpeciesSpec::preset(const std::string& name) {
    const IonSpecies s = IonSpecies::preset(name);
    if (s.label == IonSpecies::strontium88().label) return {"88Sr+", 87.9, -1434.0};
    return {"138Ba+", 137.9, -1320.0};
}

IonSpecies SpeciesSpec::resolve() const {
    IonSpecies s{label, mass_u * constants::atomic_mass_unit, dipole_a0 * constants::bohr_radius};
    s.validate();
    return s;
}

TrapConfig TrapSpec::resolve() const {
    TrapConfig t{ion_count, 2.0 * std::numbers::pi * frequency_mhz * 1e6, anisotropy};
    t.validate();
    return t;
}

namespace {

void reject_unknown(const json& object, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    if (!object.is_object()) throw ConfigError(where + " must be a JSON object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : object.items())
        if (!keys.contains(item.key()))
            throw ConfigError("unknown config key '" + where + (where.empty() ? "" : ".") +
                              item.key() + "'");
}

GridSpec parse_grid(const json& value, const std::string& where, bool* relative = nullptr) {
    GridSpec g;
    if (value.is_number()) {
        g.min = g.max = value.get<double>();
        g.points = 1;
        return g;
    }
    if (relative) reject_unknown(value, {"min", "max", "points", "relative"}, where);
    else reject_unknown(value, {"min", "max", "points"}, where);
    g.min = value.at("min").get<double>();
    g.max = value.at("max").get<double>();
    g.points = value.value("points", 2);
    if (relative) *relative = value.value("relative", false);
    return g;
}

json grid_json(const GridSpec& g) { return {{"min", g.min}, {"max", g.max}, {"points", g.points}}; }

std::vector<int> default_ion_counts() { return {2, 4, 6, 8, 10, 12, 14, 16, 18, 20}; }

RunConfig parse_document(const json& doc) {
    reject_unknown(doc,
                   {"command", "species", "trap", "model", "ion_counts", "rabi", "rf_amplitude",
                    "rf_frequency", "temperature", "thermal_epsilon", "thermal_margin", "cutoff",
                    "tau", "step", "initial", "sample_every", "threads", "output"},
                   "");
    RunConfig c;
    if (doc.contains("command")) c.command = parse_command(doc["command"].get<std::string>());

    if (doc.contains("species")) {
        const auto& s = doc["species"];
        if (s.is_string()) {
            c.species = SpeciesSpec::preset(s.get<std::string>());
        } else {
            reject_unknown(s, {"label", "mass_u", "dipole_a0"}, "species");
            c.species = SpeciesSpec{s.value("label", std::string("custom")),
                                    s.at("mass_u").get<double>(), s.at("dipole_a0").get<double>()};
        }
    }
    if (doc.contains("trap")) {
        const auto& t = doc["trap"];
        reject_unknown(t, {"ion_count", "frequency_mhz", "anisotropy"}, "trap");
        TrapSpec trap;
        trap.ion_count = t.at("ion_count").get<int>();
        trap.frequency_mhz = t.at("frequency_mhz").get<double>();
        if (t.contains("anisotropy")) trap.anisotropy = t["anisotropy"].get<double>();
        c.trap = trap;
    }
    if (doc.contains("model")) {
        const auto& m = doc["model"];
        reject_unknown(m, {"interaction", "detuning", "modes"}, "model");
        ModelParams p;
        p.interaction = m.at("interaction").get<double>();
        p.detuning = m.value("detuning", -p.interaction);
        int next_label = 2;
        for (const auto& mode : m.value("modes", json::array())) {
            reject_unknown(mode, {"p", "frequency", "coupling"}, "model.modes[]");
            PhononMode pm;
            pm.label = mode.value("p", next_label);
            pm.frequency = mode.at("frequency").get<double>();
            pm.coupling = mode.value("coupling", 0.0);
            next_label = pm.label + 1;
            p.modes.push_back(pm);
        }
        c.explicit_params = p;
    }

    c.ion_counts = doc.contains("ion_counts") ? doc["ion_counts"].get<std::vector<int>>()
                                              : default_ion_counts();
    if (doc.contains("rabi")) c.rabi = parse_grid(doc["rabi"], "rabi");
    c.rf_amplitude = doc.value("rf_amplitude", c.rf_amplitude);
    if (doc.contains("rf_frequency")) c.rf = parse_grid(doc["rf_frequency"], "rf_frequency", &c.rf_relative);
    c.temperature = doc.value("temperature", c.temperature);
    c.thermal_epsilon = doc.value("thermal_epsilon", c.thermal_epsilon);
    c.thermal_margin = doc.value("thermal_margin", c.thermal_margin);
    if (doc.contains("cutoff")) {
        const auto& cut = doc["cutoff"];
        c.cutoffs = cut.is_array() ? cut.get<std::vector<int>>() : std::vector<int>{cut.get<int>()};
    }
    c.tau = doc.value("tau", c.tau);
    c.step = doc.value("step", c.step);
    if (doc.contains("initial")) {
        const auto kind = doc["initial"].get<std::string>();
        if (kind == "bare") c.initial = InitialState::bare;
        else if (kind == "adiabatic") c.initial = InitialState::adiabatic;
        else throw ConfigError("initial must be 'bare' or 'adiabatic'");
    }
    c.sample_every = doc.value("sample_every", c.sample_every);
    c.threads = doc.value("threads", c.threads);
    c.output = doc.value("output", std::string());
    return c;
}

}  // namespace

RunConfig parse_config(const json& document) {
    // A scan sidecar carries the resolved config under "config".
    const json& doc = document.is_object() && document.contains("config") &&
                              document.contains("version")
                          ? document["config"]
                          : document;
    RunConfig c;
    try {
        c = parse_document(doc);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ModelParams RunConfig::model_params() const {
    ModelParams p;
    if (explicit_params) {
        p = *explicit_params;
    } else {
        if (!species || !trap) throw ConfigError("config: need species and trap, or model");
        const TrapConfig t = trap->resolve();
        p = physical_params(species->resolve(), t, compute_modes(t.ion_count)).params;
    }
    p.rabi = rabi.min;
    return p;
}

FockCutoffs RunConfig::fock_cutoffs(const ModelParams& params) const {
    const std::size_t m = params.modes.size();
    FockCutoffs c;
    for (const auto& mode : params.modes) c.mode_labels.push_back(mode.label);
    if (cutoffs.empty()) c.levels.assign(m, m == 1 ? 12 : 5);
    else if (cutoffs.size() == 1) c.levels.assign(m, cutoffs.front());
    else if (cutoffs.size() == m) c.levels = cutoffs;
    else
        throw ConfigError("config: cutoff lists " + std::to_string(cutoffs.size()) +
                          " entries for " + std::to_string(m) + " modes");
    return c;
}

std::vector<double> RunConfig::rf_values(const ModelParams& params) const {
    auto v = rf.values();
    if (rf_relative)
        for (auto& x : v) x += params.interaction;
    return v;
}

int RunConfig::resolved_threads() const {
    if (std::getenv("RVIB_THREADS") || threads == 0) return default_thread_count();
    return threads;
}

void RunConfig::validate() const {
    auto check_grid = [](const GridSpec& g, const char* name, int min_points) {
        if (g.points < min_points)
            throw ConfigError(std::string("config: ") + name + " needs at least " +
                              std::to_string(min_points) + " points");
        if (!std::isfinite(g.min) || !std::isfinite(g.max))
            throw ConfigError(std::string("config: ") + name + " bounds must be finite");
        if (g.points >= 2 && !(g.max > g.min))
            throw ConfigError(std::string("config: ") + name + " range is empty (max <= min)");
        if (g.points == 1 && g.max != g.min)
            throw ConfigError(std::string("config: ") + name + " with one point needs min == max");
    };
    if (threads < 0) throw ConfigError("config: threads must be >= 0");
    if (command == Command::modes) {
        if (ion_counts.empty()) throw ConfigError("config: ion_counts is empty");
        for (int n : ion_counts)
            if (n < 1 || n > 200) throw ConfigError("config: ion counts must lie in [1, 200]");
        return;
    }
    if (explicit_params && (species || trap))
        throw ConfigError("config: give either species+trap or model, not both");
    if (!explicit_params && !(species && trap))
        throw ConfigError("config: need species and trap, or model");
    switch (command) {
        case Command::spectrum: check_grid(rabi, "rabi", 2); break;
        case Command::rfscan:
            check_grid(rabi, "rabi", 2);
            check_grid(rf, "rf_frequency", 2);
            break;
        case Command::evolve:
            check_grid(rabi, "rabi", 1);
            check_grid(rf, "rf_frequency", 1);
            if (rabi.points != 1 || rf.points != 1)
                throw ConfigError("config: evolve takes a single rabi and rf_frequency");
            break;
        case Command::modes: break;
    }
    if (!(rf_amplitude >= 0.0)) throw ConfigError("config: rf_amplitude must be >= 0");
    if (!(temperature >= 0.0)) throw ConfigError("config: temperature must be >= 0");
    if (!(thermal_epsilon > 0.0 && thermal_epsilon < 1.0))
        throw ConfigError("config: thermal_epsilon must lie in (0, 1)");
    if (thermal_margin < 0) throw ConfigError("config: thermal_margin must be >= 0");
    if (!(tau > 0.0)) throw ConfigError("config: tau must be > 0");
    if (!(step > 0.0) || step > tau) throw ConfigError("config: step must lie in (0, tau]");
    if (sample_every < 1) throw ConfigError("config: sample_every must be >= 1");
    for (int n : cutoffs)
        if (n < 1) throw ConfigError("config: cutoffs must be >= 1");
    if (species) species->resolve();
    if (trap) {
        trap->resolve();
        if (trap->ion_count < 2) throw ConfigError("config: the model needs at least two ions");
    }
    const ModelParams p = model_params();
    p.validate();
    fock_cutoffs(p);
}

json RunConfig::to_json() const {
    json doc;
    doc["command"] = command_name(command);
    if (species)
        doc["species"] = {{"label", species->label},
                          {"mass_u", species->mass_u},
                          {"dipole_a0", species->dipole_a0}};
    if (trap) {
        doc["trap"] = {{"ion_count", trap->ion_count}, {"frequency_mhz", trap->frequency_mhz}};
        if (trap->anisotropy) doc["trap"]["anisotropy"] = *trap->anisotropy;
    }
    if (explicit_params) {
        json modes = json::array();
        for (const auto& m : explicit_params->modes)
            modes.push_back({{"p", m.label}, {"frequency", m.frequency}, {"coupling", m.coupling}});
        doc["model"] = {{"interaction", explicit_params->interaction},
                        {"detuning", explicit_params->detuning},
                        {"modes", modes}};
    }
    doc["ion_counts"] = ion_counts;
    doc["rabi"] = grid_json(rabi);
    doc["rf_amplitude"] = rf_amplitude;
    doc["rf_frequency"] = grid_json(rf);
    doc["rf_frequency"]["relative"] = rf_relative;
    doc["temperature"] = temperature;
    doc["thermal_epsilon"] = thermal_epsilon;
    doc["thermal_margin"] = thermal_margin;
    if (!cutoffs.empty()) doc["cutoff"] = cutoffs;
    doc["tau"] = tau;
    doc["step"] = step;
    doc["initial"] = initial == InitialState::bare ? "bare" : "adiabatic";
    doc["sample_every"] = sample_every;
    doc["threads"] = threads;
    doc["output"] = output;
    return doc;
}

void apply_override(json& document, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + assignment + "' must look like key=value");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &document;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("override '" + assignment + "' has an empty key");
        if (node->is_null()) *node = json::object();
        if (!node->is_object())
            throw ConfigError("override '" + assignment + "' descends into a non-object value");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config file '" + path + "' is not valid JSON");
    return doc;
}

}  // namespace rvib
