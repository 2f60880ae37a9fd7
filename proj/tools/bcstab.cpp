// Command-line runner: bcstab <subcommand> --config <path> [--out <dir>] [--threads N]

#include <bcstab/app.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App cli{"Stability laboratory for half-line transport schemes"};
    cli.require_subcommand(1);

    std::string config, out;
    int threads = 1;
    for (const auto& kind : bcstab::app::kinds()) {
        auto* sub = cli.add_subcommand(kind, "run the '" + kind + "' experiment");
        sub->add_option("--config", config, "JSON experiment configuration")->required();
        sub->add_option("--out", out, "output directory (overrides output_dir)");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    }
    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.exit(e);
        return rc == 0 ? 0 : bcstab::app::kError;
    }

    const std::string kind = cli.get_subcommands().front()->get_name();
    bcstab::app::ExperimentConfig cfg;
    try {
        cfg = bcstab::app::load_config(config, kind);
    } catch (const bcstab::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return bcstab::app::kError;
    } catch (const bcstab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bcstab::app::kError;
    }
    return bcstab::app::run(cfg, out.empty() ? cfg.output_dir : out, threads);
}
