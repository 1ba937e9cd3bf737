#include <cstring>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "blockade/config.hpp"
#include "blockade/lindblad.hpp"

#include "common.hpp"

namespace {

using namespace blockade_lab;

int dispatch(const std::string& command, const CliOptions& opts) {
    blockade::Config scenario;
    try {
        scenario = blockade::Config::parse_file(opts.scenario_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        if (command == "simulate") return cmd_simulate(scenario, opts);
        if (command == "grape") return cmd_grape(scenario, opts);
        if (command == "tomo") return cmd_tomo(scenario, opts);
        if (command == "fit") return cmd_fit(scenario, opts);
        std::cerr << "error: unknown command " << command << "\n";
        return kExitConfig;
    } catch (const blockade::IntegrationError& e) {
        std::cerr << "error: " << e.what() << " (t = " << e.time << " s)\n";
        return kExitIntegration;
    } catch (const blockade::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (std::strstr(e.what(), "uninvertible")) return kExitUninvertible;
        return kExitConfig;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"blockade-lab: multimode photon-blockade numerical laboratory"};
    app.require_subcommand(1);

    CliOptions opts;
    const char* names[] = {"simulate", "grape", "tomo", "fit"};
    const char* descs[] = {"Propagate a blockade scenario",
                           "Optimize a control pulse on the reduced model",
                           "Design, simulate, or invert a tomography point set",
                           "Fit an oscillation model to measured data"};
    for (int i = 0; i < 4; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("--scenario", opts.scenario_path, "Scenario config file")->required();
        sub->add_option("--seed", opts.seed, "Override the scenario seed");
        sub->add_option("--jobs", opts.jobs, "Worker threads where supported");
        sub->add_option("--out", opts.out_dir, "Output root (default $BLOCKADE_LAB_OUT or ./out)");
        sub->add_flag("--strict", opts.strict, "Exit 4 when an optimizer misses its target");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    return dispatch(app.get_subcommands().front()->get_name(), opts);
}
