#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "polyloc/errors.hpp"
#include "polyloc/experiment.hpp"
#include "polyloc/params.hpp"
#include "polyloc/version.hpp"

namespace {

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, int jobs,
            std::optional<std::string> out_dir) {
    const polyloc::ExperimentConfig cfg = polyloc::load_experiment_config(config_path);
    polyloc::RunOptions opt;
    opt.seed_override = seed;
    opt.jobs = jobs;
    opt.out_dir_override = std::move(out_dir);
    const polyloc::RunResult res = polyloc::run_experiment(cfg, opt);
    std::cout << "wrote " << res.csv_files.size() << " csv file"
              << (res.csv_files.size() == 1 ? "" : "s") << " + summary.json to " << res.out_dir
              << "\n";
    for (const auto& f : res.csv_files) std::cout << "  " << f << "\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    const polyloc::ExperimentConfig cfg = polyloc::load_experiment_config(config_path);
    std::cout << "ok: " << polyloc::kind_name(cfg.kind) << " (hash " << polyloc::config_hash(cfg)
              << ")\n";
    const auto report = polyloc::params_check(cfg.params);
    int violated = 0;
    for (const auto& c : report)
        if (!c.satisfied) ++violated;
    if (violated == 0) {
        std::cout << "parameter relations: all " << report.size() << " satisfied\n";
    } else {
        std::cout << "parameter relations: " << violated << " of " << report.size()
                  << " violated:\n";
        for (const auto& c : report)
            if (!c.satisfied) std::printf("  %-28s slack = %.6g\n", c.id.c_str(), c.slack);
    }
    return 0;
}

int cmd_presets() {
    for (const auto& name : polyloc::preset_names()) std::cout << name << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polyloc: long-range lattice operators on finite cubes"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::optional<std::string> out_dir;

    auto* run = app.add_subcommand("run", "execute an experiment config and write CSV output");
    run->add_option("config", config_path, "JSON experiment config")->required();
    run->add_option("--seed", seed, "override the base seed");
    run->add_option("--jobs", jobs, "worker threads (output is identical for any value)")
        ->check(CLI::PositiveNumber);
    run->add_option("--out", out_dir, "output directory (wins over config and POLYLOC_OUT)");

    auto* validate = app.add_subcommand("validate", "parse a config and report parameter relations");
    validate->add_option("config", config_path, "JSON experiment config")->required();

    auto* presets = app.add_subcommand("presets", "parameter presets");
    presets->require_subcommand(1);
    presets->add_subcommand("list", "list available preset names");

    auto* version = app.add_subcommand("version", "print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, seed, jobs, out_dir);
        if (validate->parsed()) return cmd_validate(config_path);
        if (presets->parsed()) return cmd_presets();
        if (version->parsed()) {
            std::cout << polyloc::kVersion << "\n";
            return 0;
        }
    } catch (const polyloc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
