#include "plbend/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace plbend {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_sci(double value) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                   std::chars_format::scientific, 9);
    return std::string(buf, ptr);
}

std::string angle_tag(double angle_rad) {
    const double pi32 = angle_rad * 32.0 / pi;
    const double rounded = std::round(pi32);
    if (std::abs(pi32 - rounded) < 1e-9) {
        return std::to_string(static_cast<long>(rounded)) + "pi32";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", angle_rad);
    std::string tag(buf);
    std::replace(tag.begin(), tag.end(), '.', 'p');
    return tag + "rad";
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

// --------------------------------------------------------------------------
// Configuration
// --------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::paper_defaults() {
    ExperimentConfig config;
    config.angles = {0.0, 16.0 * pi / 32.0, 18.0 * pi / 32.0,
                     19.0 * pi / 32.0, 20.0 * pi / 32.0};
    return config;
}

namespace {

double number_field(const json& doc, const std::string& field) {
    if (!doc.at(field).is_number())
        throw ConfigError(field, "expected a number");
    return doc.at(field).get<double>();
}

int integer_field(const json& doc, const std::string& field) {
    if (!doc.at(field).is_number_integer())
        throw ConfigError(field, "expected an integer");
    return doc.at(field).get<int>();
}

bool bool_field(const json& doc, const std::string& field) {
    if (!doc.at(field).is_boolean())
        throw ConfigError(field, "expected a boolean");
    return doc.at(field).get<bool>();
}

std::pair<double, double> range_field(const json& doc, const std::string& field) {
    const auto& v = doc.at(field);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(field, "expected [min, max]");
    return {v[0].get<double>(), v[1].get<double>()};
}

} // namespace

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
    if (!doc.is_object())
        throw ConfigError("json", "top-level document must be an object");

    ExperimentConfig config = ExperimentConfig::paper_defaults();
    for (const auto& [key, value] : doc.items()) {
        if (key == "waveguide") {
            if (!value.is_object())
                throw ConfigError("waveguide", "expected an object");
            for (const auto& [wkey, wval] : value.items()) {
                (void)wval;
                if (wkey == "width_um") {
                    config.waveguide.width = m_from_um(number_field(value, wkey));
                } else if (wkey == "height_um") {
                    config.waveguide.height = m_from_um(number_field(value, wkey));
                } else if (wkey == "substrate_index") {
                    config.waveguide.substrate_index = number_field(value, wkey);
                } else if (wkey == "index_step") {
                    config.waveguide.index_step = number_field(value, wkey);
                } else {
                    throw ConfigError("waveguide." + wkey, "unknown field");
                }
            }
        } else if (key == "wavelength_nm") {
            config.wavelength = m_from_nm(number_field(doc, key));
        } else if (key == "count") {
            config.count = integer_field(doc, key);
        } else if (key == "corner_site") {
            config.corner_site = integer_field(doc, key);
        } else if (key == "length_cm") {
            config.device_length = m_from_cm(number_field(doc, key));
        } else if (key == "angles_pi32") {
            if (!value.is_array())
                throw ConfigError(key, "expected an array of numbers");
            config.angles.clear();
            for (const auto& a : value) {
                if (!a.is_number())
                    throw ConfigError(key, "expected an array of numbers");
                config.angles.push_back(a.get<double>() * pi / 32.0);
            }
        } else if (key == "optimize") {
            config.optimize = bool_field(doc, key);
        } else if (key == "output_dir") {
            if (!value.is_string()) throw ConfigError(key, "expected a string");
            config.output_dir = value.get<std::string>();
        } else if (key == "grid_step_um") {
            config.grid_step = m_from_um(number_field(doc, key));
        } else if (key == "intensity_margin_um") {
            config.intensity_margin = m_from_um(number_field(doc, key));
        } else if (key == "fit_range_um") {
            const auto [lo, hi] = range_field(doc, key);
            config.fit_min = m_from_um(lo);
            config.fit_max = m_from_um(hi);
        } else if (key == "anisotropy_separation_um") {
            config.anisotropy_separation = m_from_um(number_field(doc, key));
        } else if (key == "separation_range_um") {
            const auto [lo, hi] = range_field(doc, key);
            config.separation_floor = m_from_um(lo);
            config.separation_ceiling = m_from_um(hi);
        } else if (key == "detuning_bracket_scale") {
            config.detuning_bracket_scale = number_field(doc, key);
        } else if (key == "quadrature_step_um") {
            config.quadrature_step = m_from_um(number_field(doc, key));
        } else if (key == "trace_points") {
            config.trace_points = integer_field(doc, key);
        } else if (key == "emit_intensity") {
            config.emit_intensity = bool_field(doc, key);
        } else {
            throw ConfigError(key, "unknown field");
        }
    }
    config.validate();
    return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError("json", e.what());
    }
    return from_json(doc);
}

json ExperimentConfig::to_json() const {
    json doc;
    doc["waveguide"] = {{"width_um", um_from_m(waveguide.width)},
                        {"height_um", um_from_m(waveguide.height)},
                        {"substrate_index", waveguide.substrate_index},
                        {"index_step", waveguide.index_step}};
    doc["wavelength_nm"] = wavelength / meters_per_nm;
    doc["count"] = count;
    doc["corner_site"] = corner_site;
    doc["length_cm"] = cm_from_m(device_length);
    json angle_list = json::array();
    for (double a : angles) angle_list.push_back(a * 32.0 / pi);
    doc["angles_pi32"] = angle_list;
    doc["optimize"] = optimize;
    doc["output_dir"] = output_dir;
    doc["grid_step_um"] = um_from_m(grid_step);
    doc["intensity_margin_um"] = um_from_m(intensity_margin);
    doc["fit_range_um"] = {um_from_m(fit_min), um_from_m(fit_max)};
    doc["anisotropy_separation_um"] = um_from_m(anisotropy_separation);
    doc["separation_range_um"] = {um_from_m(separation_floor), um_from_m(separation_ceiling)};
    doc["detuning_bracket_scale"] = detuning_bracket_scale;
    doc["quadrature_step_um"] = um_from_m(quadrature_step);
    doc["trace_points"] = trace_points;
    doc["emit_intensity"] = emit_intensity;
    return doc;
}

void ExperimentConfig::validate() const {
    try {
        waveguide.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("waveguide", e.what());
    }
    if (!(wavelength > 0.0)) throw ConfigError("wavelength_nm", "must be positive");
    if (count < 3) throw ConfigError("count", "must be at least 3");
    if (corner_site < 2 || corner_site > count - 1)
        throw ConfigError("corner_site", "must be an interior site (1 < C < N)");
    if (!(device_length > 0.0)) throw ConfigError("length_cm", "must be positive");
    for (double a : angles)
        if (!(a >= 0.0 && a < pi))
            throw ConfigError("angles_pi32", "angles must lie in [0, pi)");
    if (!(grid_step > 0.0) || grid_step > 0.5e-6)
        throw ConfigError("grid_step_um", "must lie in (0, 0.5]");
    if (intensity_margin < 0.0)
        throw ConfigError("intensity_margin_um", "must be >= 0");
    if (!(fit_min > 0.0 && fit_min < fit_max))
        throw ConfigError("fit_range_um", "must satisfy 0 < min < max");
    if (!(anisotropy_separation > 0.0))
        throw ConfigError("anisotropy_separation_um", "must be positive");
    if (!(separation_floor > 0.0 && separation_floor < separation_ceiling))
        throw ConfigError("separation_range_um", "must satisfy 0 < floor < ceiling");
    if (!(detuning_bracket_scale > 0.0))
        throw ConfigError("detuning_bracket_scale", "must be positive");
    if (!(quadrature_step > 0.0) || quadrature_step > 0.02e-6)
        throw ConfigError("quadrature_step_um", "must lie in (0, 0.02]");
    if (trace_points < 2) throw ConfigError("trace_points", "must be at least 2");
    if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

// --------------------------------------------------------------------------
// Per-angle analysis
// --------------------------------------------------------------------------

namespace {

TransferReport report_from(const LatticeHamiltonian& hamiltonian,
                           const LatticeLayout& layout, double detuning,
                           bool optimized) {
    const Eigen::MatrixXd h = with_corner_detuning(hamiltonian, detuning);
    AmplitudeVector a0 = AmplitudeVector::Zero(layout.count);
    a0(0) = 1.0;
    const AmplitudeVector a = evolve(h, layout.device_length, a0);
    TransferReport report;
    report.bend_angle = layout.bend_angle;
    report.detuning = detuning;
    report.powers = power_distribution(a);
    report.loss = 1.0 - report.powers.back();
    report.optimized = optimized;
    return report;
}

} // namespace

AngleArtifacts analyze_angle(const ExperimentConfig& config, double angle) {
    AngleArtifacts art;
    art.angle = angle;
    art.layout = build_layout(config.count, config.corner_index(), angle,
                              config.device_length, config.waveguide,
                              config.wavelength, config.separation_floor,
                              config.separation_ceiling);
    art.hamiltonian = coupling_matrix(art.layout, config.wavelength);
    art.bare = report_from(art.hamiltonian, art.layout, 0.0, false);
    art.spectrum_bare = spectrum_spacings(art.hamiltonian.matrix);

    double trace_detuning = 0.0;
    if (config.optimize) {
        const auto targets = pst_profile(config.count, config.device_length);
        const double g = std::max(targets[art.layout.corner - 1],
                                  targets[art.layout.corner]);
        const double half = config.detuning_bracket_scale * g;
        art.defect = optimize_detuning(art.layout, config.wavelength,
                                       std::make_pair(-half, half));
        art.optimized = report_from(art.hamiltonian, art.layout,
                                    art.defect->detuning, true);
        art.spectrum_optimized = spectrum_spacings(
            with_corner_detuning(art.hamiltonian, art.defect->detuning));
        trace_detuning = art.defect->detuning;
    }

    std::vector<double> z_grid(config.trace_points);
    for (int i = 0; i < config.trace_points; ++i)
        z_grid[i] = art.layout.device_length * i / (config.trace_points - 1);
    art.corner_trace = corner_power_trace(art.layout, trace_detuning, z_grid,
                                          config.wavelength);
    return art;
}

// --------------------------------------------------------------------------
// CSV builders
// --------------------------------------------------------------------------

std::string transfer_csv(const AngleArtifacts& art) {
    std::ostringstream out;
    out << "variant,angle_pi32,angle_rad,delta_per_cm,loss";
    for (int j = 1; j <= art.layout.count; ++j) out << ",P" << j;
    out << "\n";
    auto row = [&](const char* variant, const TransferReport& rep) {
        out << variant << ',' << format_sci(rep.bend_angle * 32.0 / pi) << ','
            << format_sci(rep.bend_angle) << ','
            << format_sci(per_cm_from_per_m(rep.detuning)) << ','
            << format_sci(rep.loss);
        for (double p : rep.powers) out << ',' << format_sci(p);
        out << "\n";
    };
    row("bare", art.bare);
    if (art.optimized) row("optimized", *art.optimized);
    return out.str();
}

std::string corner_trace_csv(const AngleArtifacts& art) {
    std::ostringstream out;
    out << "z_cm,corner_power\n";
    for (const auto& [z, p] : art.corner_trace)
        out << format_sci(cm_from_m(z)) << ',' << format_sci(p) << "\n";
    return out.str();
}

std::string spectrum_csv(const AngleArtifacts& art) {
    std::ostringstream out;
    out << "variant,index,eigenvalue_per_cm,spacing_per_cm\n";
    auto rows = [&](const char* variant, const SpectrumReport& rep) {
        for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
            out << variant << ',' << (i + 1) << ','
                << format_sci(per_cm_from_per_m(rep.eigenvalues[i])) << ',';
            if (i > 0) out << format_sci(per_cm_from_per_m(rep.spacings[i - 1]));
            out << "\n";
        }
    };
    rows("bare", art.spectrum_bare);
    if (art.spectrum_optimized) rows("optimized", *art.spectrum_optimized);
    return out.str();
}

std::string relative_map_csv(const AngleArtifacts& art) {
    const Eigen::MatrixXd map = relative_coupling_map(art.hamiltonian);
    std::ostringstream out;
    out << "site";
    for (int j = 1; j <= art.layout.count; ++j) out << ",c" << j;
    out << "\n";
    for (int i = 0; i < art.layout.count; ++i) {
        out << (i + 1);
        for (int j = 0; j < art.layout.count; ++j) out << ',' << format_sci(map(i, j));
        out << "\n";
    }
    return out.str();
}

std::string intensity_csv(const ExperimentConfig& config, const AngleArtifacts& art) {
    const double detuning = art.defect ? art.defect->detuning : 0.0;
    const Eigen::MatrixXd h = with_corner_detuning(art.hamiltonian, detuning);
    AmplitudeVector a0 = AmplitudeVector::Zero(art.layout.count);
    a0(0) = 1.0;
    const AmplitudeVector a = evolve(h, art.layout.device_length, a0);
    const IntensityMap map = output_intensity_map(art.layout, a, config.grid_step,
                                                  config.intensity_margin,
                                                  config.wavelength);
    std::ostringstream out;
    out << "x_um,y_um,intensity_W_cm2\n";
    for (int iy = 0; iy < map.ny; ++iy) {
        for (int ix = 0; ix < map.nx; ++ix) {
            // W/m^2 -> W/cm^2
            out << format_sci(um_from_m(map.x0 + ix * map.step)) << ','
                << format_sci(um_from_m(map.y0 + iy * map.step)) << ','
                << format_sci(map.at(ix, iy) * 1e-4) << "\n";
        }
    }
    return out.str();
}

namespace {

std::string loss_summary_csv(const ExperimentOutcome& outcome) {
    std::ostringstream out;
    out << "angle_pi32,angle_rad,loss_bare,loss_optimized,delta_per_cm\n";
    for (const auto& res : outcome.results) {
        if (!res.ok) continue;
        const auto& art = *res.artifacts;
        out << format_sci(res.angle * 32.0 / pi) << ',' << format_sci(res.angle) << ','
            << format_sci(art.bare.loss) << ',';
        if (art.optimized) out << format_sci(art.optimized->loss);
        out << ',';
        if (art.defect) out << format_sci(per_cm_from_per_m(art.defect->detuning));
        out << "\n";
    }
    return out.str();
}

std::string spectrum_summary_csv(const ExperimentOutcome& outcome) {
    std::ostringstream out;
    out << "angle_pi32,angle_rad,rms_per_cm,rms_trimmed_per_cm,"
           "rms_opt_per_cm,rms_opt_trimmed_per_cm\n";
    for (const auto& res : outcome.results) {
        if (!res.ok) continue;
        const auto& art = *res.artifacts;
        out << format_sci(res.angle * 32.0 / pi) << ',' << format_sci(res.angle) << ','
            << format_sci(per_cm_from_per_m(art.spectrum_bare.rms_deviation)) << ','
            << format_sci(per_cm_from_per_m(art.spectrum_bare.trimmed_rms_deviation))
            << ',';
        if (art.spectrum_optimized) {
            out << format_sci(per_cm_from_per_m(art.spectrum_optimized->rms_deviation))
                << ','
                << format_sci(
                       per_cm_from_per_m(art.spectrum_optimized->trimmed_rms_deviation));
        } else {
            out << ',';
        }
        out << "\n";
    }
    return out.str();
}

std::string table1_rows_csv(const std::vector<const DefectResult*>& rows) {
    std::ostringstream out;
    out << "angle_pi32,delta_per_cm,abs_delta_over_G,index_change_pct,size_change_pct\n";
    for (const DefectResult* r : rows) {
        out << format_sci(r->bend_angle * 32.0 / pi) << ','
            << format_sci(per_cm_from_per_m(r->detuning)) << ','
            << format_sci(r->detuning_to_coupling_ratio) << ','
            << format_sci(r->index_change_pct) << ','
            << format_sci(r->size_change_pct) << "\n";
    }
    return out.str();
}

} // namespace

// --------------------------------------------------------------------------
// Sweep driver
// --------------------------------------------------------------------------

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
    config.validate();
    fs::create_directories(config.output_dir);

    ExperimentOutcome outcome;
    std::vector<std::pair<std::string, std::string>> digests;

    auto emit = [&](const std::string& name, const std::string& content) {
        std::ofstream file(fs::path(config.output_dir) / name, std::ios::binary);
        if (!file) throw Error("cannot write output file " + name);
        file << content;
        outcome.files.push_back(name);
        digests.emplace_back(name, fnv1a_hex(content));
    };

    for (double angle : config.angles) {
        AngleResult result;
        result.angle = angle;
        try {
            auto art = std::make_shared<AngleArtifacts>(analyze_angle(config, angle));
            const std::string tag = angle_tag(angle);
            emit("layout_" + tag + ".json", layout_to_json(art->layout).dump(2) + "\n");
            emit("relative_couplings_" + tag + ".csv", relative_map_csv(*art));
            emit("transfer_" + tag + ".csv", transfer_csv(*art));
            emit("corner_trace_" + tag + ".csv", corner_trace_csv(*art));
            emit("spectrum_" + tag + ".csv", spectrum_csv(*art));
            if (config.emit_intensity)
                emit("intensity_" + tag + ".csv", intensity_csv(config, *art));
            result.artifacts = std::move(art);
            result.ok = true;
        } catch (const std::exception& e) {
            result.ok = false;
            result.error = e.what();
            ++outcome.failures;
        }
        outcome.results.push_back(std::move(result));
    }

    if (!config.angles.empty()) {
        emit("loss_vs_angle.csv", loss_summary_csv(outcome));
        emit("spectrum_summary.csv", spectrum_summary_csv(outcome));
        if (config.optimize) {
            std::vector<const DefectResult*> rows;
            for (const auto& res : outcome.results)
                if (res.ok && res.artifacts->defect) rows.push_back(&*res.artifacts->defect);
            emit("table1.csv", table1_rows_csv(rows));
        }
    }

    json manifest;
    manifest["input_digest"] = fnv1a_hex(config.to_json().dump(2));
    json files = json::array();
    for (const auto& [name, digest] : digests)
        files.push_back({{"name", name}, {"digest", digest}});
    manifest["files"] = files;
    {
        std::ofstream file(fs::path(config.output_dir) / "manifest.json",
                           std::ios::binary);
        if (!file) throw Error("cannot write manifest.json");
        file << manifest.dump(2) << "\n";
    }
    return outcome;
}

std::string table1_report(const ExperimentConfig& config) {
    config.validate();
    std::vector<DefectResult> results;
    results.reserve(config.angles.size());
    for (double angle : config.angles) {
        const LatticeLayout layout = build_layout(
            config.count, config.corner_index(), angle, config.device_length,
            config.waveguide, config.wavelength, config.separation_floor,
            config.separation_ceiling);
        const auto targets = pst_profile(config.count, config.device_length);
        const double g = std::max(targets[layout.corner - 1], targets[layout.corner]);
        const double half = config.detuning_bracket_scale * g;
        results.push_back(optimize_detuning(layout, config.wavelength,
                                            std::make_pair(-half, half)));
    }
    std::vector<const DefectResult*> rows;
    for (const auto& r : results) rows.push_back(&r);
    return table1_rows_csv(rows);
}

// --------------------------------------------------------------------------
// Layout serialization
// --------------------------------------------------------------------------

json layout_to_json(const LatticeLayout& layout) {
    json doc;
    doc["count"] = layout.count;
    doc["corner_site"] = layout.corner + 1;
    doc["bend_angle_rad"] = layout.bend_angle;
    doc["device_length_cm"] = cm_from_m(layout.device_length);

    json positions = json::array();
    for (const auto& p : layout.positions)
        positions.push_back({um_from_m(p[0]), um_from_m(p[1])});
    doc["positions_um"] = positions;

    json sites = json::array();
    for (int j = 0; j < layout.count; ++j) {
        const auto& s = layout.specs[j];
        sites.push_back({{"width_um", um_from_m(s.width)},
                         {"height_um", um_from_m(s.height)},
                         {"substrate_index", s.substrate_index},
                         {"index_step", s.index_step},
                         {"sigma_um2", s.cross_section() / (meters_per_um * meters_per_um)},
                         {"beta_per_cm", per_cm_from_per_m(layout.betas[j])}});
    }
    doc["sites"] = sites;

    json links = json::array();
    for (double r : layout.link_separations) links.push_back(um_from_m(r));
    doc["link_separations_um"] = links;
    return doc;
}

LatticeLayout layout_from_json(const json& doc) {
    LatticeLayout layout;
    layout.count = doc.at("count").get<int>();
    layout.corner = doc.at("corner_site").get<int>() - 1;
    layout.bend_angle = doc.at("bend_angle_rad").get<double>();
    layout.device_length = m_from_cm(doc.at("device_length_cm").get<double>());

    for (const auto& p : doc.at("positions_um"))
        layout.positions.push_back({m_from_um(p.at(0).get<double>()),
                                    m_from_um(p.at(1).get<double>())});
    for (const auto& s : doc.at("sites")) {
        WaveguideSpec spec;
        spec.width = m_from_um(s.at("width_um").get<double>());
        spec.height = m_from_um(s.at("height_um").get<double>());
        spec.substrate_index = s.at("substrate_index").get<double>();
        spec.index_step = s.at("index_step").get<double>();
        layout.specs.push_back(spec);
        layout.betas.push_back(per_m_from_per_cm(s.at("beta_per_cm").get<double>()));
    }
    for (const auto& r : doc.at("link_separations_um"))
        layout.link_separations.push_back(m_from_um(r.get<double>()));

    if (static_cast<int>(layout.positions.size()) != layout.count ||
        static_cast<int>(layout.specs.size()) != layout.count)
        throw ConfigError("layout", "site count mismatch");
    return layout;
}

} // namespace plbend
