#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "feasops/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"feasops: configuration-driven experiments for sphere/convex-set "
                 "splitting operators"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;

    const std::vector<std::string> commands{"trajectory",      "lipschitz-table", "ergodic-dr",
                                            "ergodic-family",  "ergodic-vn",      "sign-invariance",
                                            "extension-check"};
    for (const std::string& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed_override, "override the config seed");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        feasops::ExperimentConfig cfg = feasops::ExperimentConfig::load(config_path);
        cfg.command = app.get_subcommands().front()->get_name();
        if (seed_override) cfg.seed = *seed_override;
        return feasops::run_experiment(cfg, out_dir, std::cerr);
    } catch (const feasops::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return feasops::kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return feasops::kExitRuntime;
    }
}
