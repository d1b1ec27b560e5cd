#include <iostream>

#include <CLI11.hpp>

#include "hnb/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"N-body dynamics on surfaces of constant negative curvature"};
    hnb::RunOptions opts;
    std::string mode;
    std::string out;
    double tol = 0.0;

    app.add_option("--config", opts.config_path, "YAML run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--mode", mode, "simulate, solve-re, verify-re, certify-parabolic or report (overrides config)");
    app.add_option("--out", out, "output directory (HNB_OUT_DIR takes precedence)");
    app.add_option("--jobs", opts.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_flag("--deterministic", opts.deterministic, "omit timings so reruns are byte-identical");
    app.add_option("--tol", tol, "integrator rel tolerance, or residual tolerance in RE modes")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hnb::exit_code::parse_error;
    }

    if (!mode.empty()) {
        try {
            opts.mode = hnb::mode_from_name(mode);
        } catch (const hnb::ConfigError& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return hnb::exit_code::parse_error;
        }
    }
    if (!out.empty()) opts.out_dir = out;
    if (app.count("--tol") > 0) opts.tol = tol;
    return hnb::run(opts, std::cerr);
}
