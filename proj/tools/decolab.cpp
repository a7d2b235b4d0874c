// decolab: decoherence exponents, kernels, and density-matrix evolution for
// four open-system model families. Subcommands: run, fig1, fig2.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "decolab/run.hpp"

namespace {

std::string resolve_out(const std::string& flag_value, const std::string& config_value) {
    if (!flag_value.empty()) return flag_value;
    if (!config_value.empty()) return config_value;
    const char* env = std::getenv("DECOLAB_OUT");
    return env ? env : "";
}

int report(const decolab::cli::RunOutput& out) {
    if (out.exit_code == 2) {
        std::cerr << "error: " << out.error << "\n";
        return 2;
    }
    for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& f : out.files) std::cout << f << "\n";
    return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(decolab::cli::kToolVersion) +
                 " - open-system decoherence calculations"};
    app.require_subcommand(1);

    // run
    std::string config_path, out_dir;
    int workers = 1;
    double tol = 0.0;
    auto* cmd_run = app.add_subcommand("run", "execute a parameter-file run");
    cmd_run->add_option("config", config_path, "path to the key=value config")->required();
    cmd_run->add_option("--out", out_dir, "output directory (fallback: DECOLAB_OUT)");
    cmd_run->add_option("--workers", workers, "concurrent sweep workers");
    cmd_run->add_option("--tol", tol, "quadrature tolerance override");

    // fig1
    decolab::cli::FigParams fig;
    std::string fig_out;
    int fig_points = 101;
    double tmax = 10.0, lmax = 10.0;
    bool numeric = false, no_validate = false;
    int fig_workers = 1;
    auto* cmd_fig1 = app.add_subcommand("fig1", "n=3 high-T decoherence surface data");
    cmd_fig1->add_option("--out", fig_out, "output directory (fallback: DECOLAB_OUT)");
    cmd_fig1->add_option("--points", fig_points, "grid resolution per axis");
    cmd_fig1->add_option("--tmax", tmax, "time extent in cutoff units");
    cmd_fig1->add_option("--Lmax", lmax, "separation extent in cutoff units");
    cmd_fig1->add_option("--g", fig.g, "coupling");
    cmd_fig1->add_option("--Gamma", fig.Gamma, "UV cutoff");
    cmd_fig1->add_option("--T", fig.T, "temperature for the thermal cases");
    cmd_fig1->add_flag("--numeric", numeric, "use the radial quadrature instead of closed forms");
    cmd_fig1->add_flag("--no-validate", no_validate, "skip the closed-form validation report");
    cmd_fig1->add_option("--workers", fig_workers, "concurrent workers");

    // fig2
    std::string fig2_out;
    int fig2_points = 160;
    double fig2_lmax = 8.0;
    bool fig2_no_validate = false;
    int fig2_workers = 1;
    decolab::cli::FigParams fig2;
    auto* cmd_fig2 = app.add_subcommand("fig2", "D_L slices at Gamma t = 1, 2, 3 for all four cases");
    cmd_fig2->add_option("--out", fig2_out, "output directory (fallback: DECOLAB_OUT)");
    cmd_fig2->add_option("--points", fig2_points, "separation samples");
    cmd_fig2->add_option("--Lmax", fig2_lmax, "separation extent in cutoff units");
    cmd_fig2->add_option("--g", fig2.g, "coupling");
    cmd_fig2->add_option("--Gamma", fig2.Gamma, "UV cutoff");
    cmd_fig2->add_option("--T", fig2.T, "temperature for the thermal cases");
    cmd_fig2->add_flag("--no-validate", fig2_no_validate, "skip the closed-form validation report");
    cmd_fig2->add_option("--workers", fig2_workers, "concurrent workers");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            auto cfg = decolab::cli::parse_config_file(config_path);
            cfg.out_dir = resolve_out(out_dir, cfg.out_dir);
            if (workers > 1) cfg.workers = workers;
            if (tol > 0.0) cfg.tol_override = tol;
            return report(decolab::cli::run(cfg));
        }
        if (cmd_fig1->parsed()) {
            const std::string dir = resolve_out(fig_out, "");
            return report(decolab::cli::fig1_grid(fig, tmax, lmax, fig_points, dir, numeric,
                                                  fig_workers, !no_validate));
        }
        const std::string dir = resolve_out(fig2_out, "");
        return report(decolab::cli::fig2_slices(fig2, fig2_lmax, fig2_points, dir, fig2_workers,
                                                !fig2_no_validate));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
