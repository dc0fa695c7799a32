// Command-line driver for the bent photonic-lattice transfer toolkit.
//
// Verbs: modes, coupling-scan, engineer, propagate, optimize-defect,
// spectrum, reproduce-paper.  Each reads an optional JSON config and
// writes CSV/JSON files into the output directory.
//
// Exit codes: 0 full success, 1 configuration error, 2 partial
// per-angle failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "plbend/experiment.hpp"

using namespace plbend;
namespace fs = std::filesystem;

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::vector<double> angles_pi32;
    bool no_optimize = false;
    bool emit_intensity = false;
};

ExperimentConfig make_config(const CommonOptions& opts) {
    ExperimentConfig config = opts.config_path.empty()
                                  ? ExperimentConfig::paper_defaults()
                                  : ExperimentConfig::from_file(opts.config_path);
    if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
    if (!opts.angles_pi32.empty()) {
        config.angles.clear();
        for (double v : opts.angles_pi32) config.angles.push_back(v * pi / 32.0);
    }
    if (opts.no_optimize) config.optimize = false;
    if (opts.emit_intensity) config.emit_intensity = true;
    config.validate();
    return config;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
    fs::create_directories(dir);
    std::ofstream file(fs::path(dir) / name, std::ios::binary);
    if (!file) throw Error("cannot write output file " + name);
    file << content;
}

int run_modes(const ExperimentConfig& config) {
    const auto mode = solve_mode(config.waveguide, config.wavelength);
    std::ostringstream out;
    out << "width_um,height_um,substrate_index,index_step,kx_per_cm,ky_per_cm,"
           "gamma_x_per_cm,gamma_y_per_cm,beta_per_cm,amplitude_V_per_m\n";
    out << format_sci(um_from_m(config.waveguide.width)) << ','
        << format_sci(um_from_m(config.waveguide.height)) << ','
        << format_sci(config.waveguide.substrate_index) << ','
        << format_sci(config.waveguide.index_step) << ','
        << format_sci(per_cm_from_per_m(mode.kx)) << ','
        << format_sci(per_cm_from_per_m(mode.ky)) << ','
        << format_sci(per_cm_from_per_m(mode.gamma_x)) << ','
        << format_sci(per_cm_from_per_m(mode.gamma_y)) << ','
        << format_sci(per_cm_from_per_m(mode.beta)) << ','
        << format_sci(mode.amplitude) << "\n";
    write_file(config.output_dir, "modes.csv", out.str());
    return 0;
}

int run_coupling_scan(const ExperimentConfig& config) {
    const auto mode = solve_mode(config.waveguide, config.wavelength);
    const double angles[] = {0.0, pi / 8, pi / 4, 3 * pi / 8, pi / 2};

    std::vector<double> seps;
    for (double r = config.fit_min; r <= config.fit_max + 1e-12; r += 1e-6)
        seps.push_back(r);

    std::ostringstream scan, fits;
    scan << "theta_rad,r_um,coupling_per_cm\n";
    fits << "theta_rad,mu_per_cm,xi_per_cm,rms_log_residual,r_min_um,r_max_um\n";
    for (double theta : angles) {
        for (double r : seps) {
            const double j = coupling_analytic(mode, config.waveguide, mode,
                                               config.waveguide,
                                               PairGeometry::folded(r, theta));
            scan << format_sci(theta) << ',' << format_sci(um_from_m(r)) << ','
                 << format_sci(per_cm_from_per_m(j)) << "\n";
        }
        const auto law = fit_exponential(mode, config.waveguide, theta, seps);
        fits << format_sci(theta) << ',' << format_sci(per_cm_from_per_m(law.prefactor))
             << ',' << format_sci(per_cm_from_per_m(law.decay_rate)) << ','
             << format_sci(law.rms_log_residual) << ','
             << format_sci(um_from_m(law.r_min)) << ','
             << format_sci(um_from_m(law.r_max)) << "\n";
    }

    std::vector<double> grid;
    for (int i = 0; i <= 64; ++i) grid.push_back(0.5 * pi * i / 64.0);
    const auto aniso = anisotropy_scan(config.waveguide, config.wavelength,
                                       config.anisotropy_separation, grid);
    std::ostringstream acsv;
    acsv << "theta_rad,coupling_per_cm\n";
    for (const auto& [theta, j] : aniso)
        acsv << format_sci(theta) << ',' << format_sci(per_cm_from_per_m(j)) << "\n";

    write_file(config.output_dir, "coupling_scan.csv", scan.str());
    write_file(config.output_dir, "coupling_fit.csv", fits.str());
    write_file(config.output_dir, "anisotropy_scan.csv", acsv.str());
    return 0;
}

// Per-angle verbs share the failure-isolation policy of the sweep.
template <typename Fn>
int for_each_angle(const ExperimentConfig& config, Fn&& emit_for_angle) {
    int failures = 0;
    for (double angle : config.angles) {
        try {
            emit_for_angle(angle);
        } catch (const std::exception& e) {
            std::cerr << "angle " << angle_tag(angle) << ": " << e.what() << "\n";
            ++failures;
        }
    }
    return failures == 0 ? 0 : 2;
}

int run_engineer(const ExperimentConfig& config) {
    std::ostringstream seps;
    seps << "angle_pi32,link,r_um\n";
    const int code = for_each_angle(config, [&](double angle) {
        const auto layout = build_layout(config.count, config.corner_index(), angle,
                                         config.device_length, config.waveguide,
                                         config.wavelength, config.separation_floor,
                                         config.separation_ceiling);
        write_file(config.output_dir, "layout_" + angle_tag(angle) + ".json",
                   layout_to_json(layout).dump(2) + "\n");
        for (std::size_t j = 0; j < layout.link_separations.size(); ++j)
            seps << format_sci(angle * 32.0 / pi) << ',' << (j + 1) << ','
                 << format_sci(um_from_m(layout.link_separations[j])) << "\n";
    });
    write_file(config.output_dir, "separations.csv", seps.str());
    return code;
}

int run_propagate(const ExperimentConfig& config) {
    return for_each_angle(config, [&](double angle) {
        const auto art = analyze_angle(config, angle);
        const std::string tag = angle_tag(angle);
        write_file(config.output_dir, "transfer_" + tag + ".csv", transfer_csv(art));
        write_file(config.output_dir, "corner_trace_" + tag + ".csv",
                   corner_trace_csv(art));
        if (config.emit_intensity)
            write_file(config.output_dir, "intensity_" + tag + ".csv",
                       intensity_csv(config, art));
    });
}

int run_optimize_defect(const ExperimentConfig& config) {
    write_file(config.output_dir, "table1.csv", table1_report(config));
    return 0;
}

int run_spectrum(const ExperimentConfig& config) {
    return for_each_angle(config, [&](double angle) {
        const auto art = analyze_angle(config, angle);
        write_file(config.output_dir, "spectrum_" + angle_tag(angle) + ".csv",
                   spectrum_csv(art));
    });
}

int run_reproduce(const ExperimentConfig& config) {
    const auto outcome = run_experiment(config);
    for (const auto& res : outcome.results)
        if (!res.ok)
            std::cerr << "angle " << angle_tag(res.angle) << ": " << res.error << "\n";
    return outcome.failures == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bent photonic-lattice transfer toolkit"};
    app.require_subcommand(1);

    CommonOptions opts;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "JSON config path");
        cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_option("--angles", opts.angles_pi32,
                        "bend angles in units of pi/32 (comma separated)")
            ->delimiter(',');
        cmd->add_flag("--no-optimize", opts.no_optimize,
                      "skip the corner-defect optimization");
        cmd->add_flag("--emit-intensity", opts.emit_intensity,
                      "write output intensity maps");
        return cmd;
    };

    auto* modes = add_common(app.add_subcommand("modes", "solve the isolated waveguide mode"));
    auto* cscan = add_common(app.add_subcommand("coupling-scan",
                                                "coupling versus separation and angle"));
    auto* engineer = add_common(app.add_subcommand("engineer",
                                                   "engineer separations for each bend angle"));
    auto* propagate = add_common(app.add_subcommand("propagate",
                                                    "evolve the input and report exit powers"));
    auto* optdef = add_common(app.add_subcommand("optimize-defect",
                                                 "optimize the corner detuning per angle"));
    auto* spectrum = add_common(app.add_subcommand("spectrum",
                                                   "eigenvalue spacing diagnostics"));
    auto* reproduce = add_common(app.add_subcommand("reproduce-paper",
                                                    "full sweep with manifest"));

    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig config = make_config(opts);
        if (modes->parsed()) return run_modes(config);
        if (cscan->parsed()) return run_coupling_scan(config);
        if (engineer->parsed()) return run_engineer(config);
        if (propagate->parsed()) return run_propagate(config);
        if (optdef->parsed()) return run_optimize_defect(config);
        if (spectrum->parsed()) return run_spectrum(config);
        if (reproduce->parsed()) return run_reproduce(config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
