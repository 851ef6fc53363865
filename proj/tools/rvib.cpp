#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rvib/config.hpp"
#include "rvib/error.hpp"
#include "rvib/runner.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rydberg ion vibronic spectroscopy simulator"};
    app.set_version_flag("--version", rvib::version);
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    for (const char* name : {"modes", "spectrum", "rfscan", "evolve"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--set", overrides, "override a config field, e.g. --set rabi.points=31")
            ->allow_extra_args(false);
        sub->add_option("--out", out_path, "output CSV path");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        nlohmann::json doc = config_path.empty() ? nlohmann::json::object()
                                                 : rvib::load_json_file(config_path);
        if (doc.contains("config") && doc.contains("version")) doc = doc["config"];
        doc["command"] = command;
        for (const auto& o : overrides) rvib::apply_override(doc, o);
        if (!out_path.empty()) doc["output"] = out_path;

        const rvib::RunConfig config = rvib::parse_config(doc);
        const rvib::RunOutcome outcome = rvib::run(config);
        for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
        std::cerr << "wrote " << outcome.primary_path;
        if (!outcome.sidecar_path.empty()) std::cerr << " and " << outcome.sidecar_path;
        std::cerr << '\n';
        return 0;
    } catch (const rvib::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const rvib::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    }
}
