#ifndef PLBEND_EXPERIMENT_HPP
#define PLBEND_EXPERIMENT_HPP

#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plbend/defect_opt.hpp"
#include "plbend/spectrum.hpp"

namespace plbend {

// Locale-independent scientific formatting, 10 significant digits.
// Every CSV number goes through here so identical configs produce
// byte-identical outputs.
std::string format_sci(double value);

// Deterministic per-angle file tag: "16pi32" when the angle is an
// integer multiple of pi/32, otherwise a fixed-precision radian tag.
std::string angle_tag(double angle_rad);

// FNV-1a 64-bit content digest, hex encoded.
std::string fnv1a_hex(std::string_view bytes);

// Everything a sweep needs; all physical fields in SI units.
struct ExperimentConfig {
    WaveguideSpec waveguide = WaveguideSpec::rectangular_um(6.0, 2.0, 1.444, 1e-3);
    double wavelength = 800e-9;      // m
    int count = 9;                   // N
    int corner_site = 5;             // 1-based C
    double device_length = 0.1;      // m
    std::vector<double> angles;      // bend angles (rad)
    bool optimize = true;
    std::string output_dir = "out";
    double grid_step = 0.1e-6;           // intensity sampling (m)
    double intensity_margin = 10e-6;     // box margin around sites (m)
    double fit_min = 15e-6;              // exponential-fit range (m)
    double fit_max = 40e-6;
    double anisotropy_separation = 30e-6;
    double separation_floor = 8e-6;      // engineering bracket (m)
    double separation_ceiling = 100e-6;
    double detuning_bracket_scale = 3.0;  // bracket = scale * [-G, +G]
    double quadrature_step = 0.01e-6;     // coupling oracle step (m)
    int trace_points = 201;
    bool emit_intensity = false;

    int corner_index() const { return corner_site - 1; }

    // The sweep used throughout the study of the N=9, L=10 cm chain.
    static ExperimentConfig paper_defaults();

    static ExperimentConfig from_json(const nlohmann::json& doc);
    static ExperimentConfig from_file(const std::string& path);
    nlohmann::json to_json() const;

    // Throws ConfigError naming the offending JSON field.
    void validate() const;
};

// In-memory results for one bend angle.
struct AngleArtifacts {
    double angle = 0.0;
    LatticeLayout layout;
    LatticeHamiltonian hamiltonian;
    TransferReport bare;
    SpectrumReport spectrum_bare;
    std::optional<DefectResult> defect;
    std::optional<TransferReport> optimized;
    std::optional<SpectrumReport> spectrum_optimized;
    std::vector<std::pair<double, double>> corner_trace;  // (z, P_C)
};

struct AngleResult {
    double angle = 0.0;
    bool ok = false;
    std::string error;
    std::shared_ptr<AngleArtifacts> artifacts;  // null on failure
};

struct ExperimentOutcome {
    std::vector<AngleResult> results;
    std::vector<std::string> files;  // emitted names, in emission order
    int failures = 0;
};

// Build layout, Hamiltonian, transfer, spectrum, optional optimization
// and corner trace for one angle.  Throws on engineering failure.
AngleArtifacts analyze_angle(const ExperimentConfig& config, double angle);

// CSV renderings of per-angle artifacts; column sets documented in the
// repository README.
std::string transfer_csv(const AngleArtifacts& artifacts);
std::string corner_trace_csv(const AngleArtifacts& artifacts);
std::string spectrum_csv(const AngleArtifacts& artifacts);
std::string relative_map_csv(const AngleArtifacts& artifacts);
std::string intensity_csv(const ExperimentConfig& config, const AngleArtifacts& artifacts);

// Full sweep: per-angle artifacts and files, summary CSVs, and a
// manifest listing every emitted file with its content digest.
// Per-angle failures are recorded without aborting the other angles.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

// Corner-defect summary, one CSV row per configured angle:
// angle, Delta (1/cm), |Delta|/G, index-change %, size-change %.
std::string table1_report(const ExperimentConfig& config);

// Layout serialization (positions in um, lengths in cm, 1-based corner).
nlohmann::json layout_to_json(const LatticeLayout& layout);
LatticeLayout layout_from_json(const nlohmann::json& doc);

} // namespace plbend

#endif
