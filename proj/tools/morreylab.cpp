// Command-line driver: one subcommand per registered experiment, plus `list`.
// Prints the report JSON to stdout; --out saves it (a .csv suffix selects the
// CSV rendering). Exit codes: 0 = completed with no FAIL assertion, 1 = a
// FAIL assertion (or an internal error), 2 = usage or configuration error.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "morrey/report.hpp"

namespace {

int run_experiment(const std::string& name, const std::string& config_path,
                   const std::string& out_path, std::optional<std::uint64_t> seed) {
    morrey::ExperimentConfig cfg;
    if (!config_path.empty()) {
        cfg = morrey::ExperimentConfig::from_json_file(config_path);
        if (cfg.experiment != name)
            throw std::invalid_argument("config file names experiment '" + cfg.experiment +
                                        "' but the subcommand is '" + name + "'");
    } else {
        cfg.experiment = name;
    }
    if (seed) cfg.seed = *seed;
    if (!out_path.empty()) cfg.out_path = out_path;

    morrey::Report rep = morrey::run(cfg);
    std::cout << rep.to_json();
    if (!rep.config.out_path.empty()) {
        const std::string& p = rep.config.out_path;
        if (p.size() >= 4 && p.compare(p.size() - 4, 4, ".csv") == 0)
            rep.save_csv(p);
        else
            rep.save(p);
    }
    return rep.any_fail() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(morrey::kToolName) +
                 ": config-driven numerical experiments for weighted Morrey-space analysis"};
    app.set_version_flag("--version", std::string(morrey::kToolVersion));
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string out_path;
    std::uint64_t seed_val = 0;
    for (const auto& info : morrey::list_experiments()) {
        auto* sc = app.add_subcommand(info.name, info.summary);
        sc->add_option("--config", config_path, "JSON experiment configuration to load");
        sc->add_option("--out", out_path,
                       "write the report to this path (.csv selects CSV, otherwise JSON)");
        sc->add_option("--seed", seed_val, "seed for randomized experiments");
    }
    app.add_subcommand("list", "print the experiment registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto parsed = app.get_subcommands();
    if (parsed.empty()) {
        std::cerr << app.help() << "\n" << morrey::registry_table();
        return 2;
    }
    CLI::App* sc = parsed.front();
    if (sc->get_name() == "list") {
        std::cout << morrey::registry_table();
        return 0;
    }
    std::optional<std::uint64_t> seed;
    if (sc->count("--seed") > 0) seed = seed_val;
    try {
        return run_experiment(sc->get_name(), config_path, out_path, seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
