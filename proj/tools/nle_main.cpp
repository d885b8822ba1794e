#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nle/config.hpp"
#include "nle/error.hpp"
#include "nle/experiments.hpp"

namespace {

std::vector<double> parse_grids(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto slash = item.find('/');
        std::size_t used = 0;
        double v = 0.0;
        if (slash == std::string::npos) {
            v = std::stod(item, &used);
            if (used != item.size()) throw nle::ConfigError("bad grid spacing '" + item + "'");
        } else {
            const std::string num = item.substr(0, slash);
            const std::string den = item.substr(slash + 1);
            std::size_t a = 0, b = 0;
            v = std::stod(num, &a) / std::stod(den, &b);
            if (a != num.size() || b != den.size()) throw nle::ConfigError("bad grid spacing '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Level-set solver for a nonlocal front propagation equation"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string grids;

    const auto add = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("config", config_path, "YAML configuration file")->required();
        sub->add_option("--seed", seed, "Override the configured random seed");
        return sub;
    };
    CLI::App* simulate = add("simulate", "Run the weak-solution engine and write the solution and diagnostics");
    CLI::App* counterexample = add("counterexample", "Verify the non-uniqueness construction for each gamma");
    CLI::App* verify = add("verify", "Run the property batteries");
    CLI::App* convergence = add("convergence", "Grid refinement study");
    convergence->add_option("--grids", grids, "Comma-separated spacings, e.g. 1/50,1/100,1/200");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : nle::kExitConfigError;
    }

    nle::RunOptions options;
    options.output_root = nle::output_root_from_env();
    options.seed = seed;

    try {
        const nle::ExperimentConfig config = nle::load_config(config_path);
        if (simulate->parsed()) return nle::run_simulate(config, options);
        if (counterexample->parsed()) return nle::run_counterexample(config, options);
        if (verify->parsed()) return nle::run_verify(config, options);
        if (convergence->parsed()) return nle::run_convergence(config, parse_grids(grids), options);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return nle::kExitConfigError;
    }
    return nle::kExitConfigError;
}
