// hodgeqi: structure-preserving quasi-interpolation of sampled vector fields
// and numerical Helmholtz-Hodge decomposition.
//
// Subcommands: wholespace | bounded | validate | decompose | kernel-dump | plot
// All take --config <json> and an optional --out <dir> prefix for outputs.
// Exit codes: 0 success, 2 validation failure, 1 error.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "hodgeqi/hodgeqi.hpp"

namespace {

std::string joined(const std::string& out_dir, const std::string& path) {
    if (out_dir.empty() || path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute()) return path;
    return (std::filesystem::path(out_dir) / p).string();
}

void write_outputs(const hodgeqi::ConvergenceReport& rep, const hodgeqi::ExperimentConfig& cfg,
                   const std::string& out_dir) {
    std::string report_path = joined(out_dir, cfg.out_report);
    hodgeqi::save_report_csv(rep, report_path);
    std::cout << "report: " << report_path << "\n";
    if (!cfg.out_plot.empty()) {
        std::string plot_path = joined(out_dir, cfg.out_plot);
        hodgeqi::emit_plot(rep, plot_path);
        std::cout << "plot: " << plot_path << "\n";
    }
    for (const auto& r : rep.rows) {
        std::printf("h=%-12.6g error_div=%-14.6e error_curl=%-14.6e error_full=%-14.6e\n",
                    r.h, r.error_div, r.error_curl, r.error_full);
    }
    std::printf("slopes (window %d): div=%.4f curl=%.4f full=%.4f\n", rep.slope_window,
                rep.slope_div, rep.slope_curl, rep.slope_full);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polyharmonic-spline quasi-interpolation for the Helmholtz-Hodge "
                 "decomposition"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    for (const char* name :
         {"wholespace", "bounded", "validate", "decompose", "kernel-dump", "plot"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory prefix");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        hodgeqi::ExperimentConfig cfg = hodgeqi::ExperimentConfig::from_file(config_path);
        if (cfg.experiment != cmd)
            throw hodgeqi::config_error("config experiment '" + cfg.experiment +
                                        "' does not match subcommand '" + cmd + "'");

        if (cmd == "wholespace") {
            write_outputs(hodgeqi::run_wholespace(cfg), cfg, out_dir);
        } else if (cmd == "bounded") {
            write_outputs(hodgeqi::run_bounded(cfg), cfg, out_dir);
        } else if (cmd == "validate") {
            auto rep = hodgeqi::run_validate(cfg);
            std::string report_path = joined(out_dir, cfg.out_report);
            {
                std::ofstream os(report_path);
                if (!os) throw hodgeqi::io_error("cannot open " + report_path);
                hodgeqi::save_validation_csv(rep, os);
            }
            for (const auto& e : rep.entries)
                std::printf("%-4s %-12s %-34s measured=%-12.4e threshold=%-10.2e\n",
                            e.pass ? "ok" : "FAIL", e.suite.c_str(), e.name.c_str(),
                            e.measured, e.threshold);
            std::cout << "report: " << report_path << "\n";
            if (!rep.all_pass()) {
                std::cout << "validation FAILED\n";
                return 2;
            }
            std::cout << "validation passed\n";
        } else if (cmd == "decompose") {
            std::string prefix = joined(out_dir, cfg.out_fields);
            hodgeqi::run_decompose(cfg, prefix);
            std::cout << "fields: " << prefix << "_{observed,div,curl,sum}.csv\n";
        } else if (cmd == "kernel-dump") {
            std::string path = joined(out_dir, cfg.out_report);
            std::ofstream os(path);
            if (!os) throw hodgeqi::io_error("cannot open " + path);
            hodgeqi::kernel_dump_csv(cfg, os);
            std::cout << "dump: " << path << "\n";
        } else if (cmd == "plot") {
            if (cfg.report_csv.empty())
                throw hodgeqi::config_error("plot: config needs plot.report_csv");
            auto rep = hodgeqi::load_report_csv(joined(out_dir, cfg.report_csv));
            if (cfg.out_plot.empty())
                throw hodgeqi::config_error("plot: config needs plot.svg");
            std::string path = joined(out_dir, cfg.out_plot);
            hodgeqi::emit_plot(rep, path);
            std::cout << "plot: " << path << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
