#ifndef PLBEND_DEFECT_OPT_HPP
#define PLBEND_DEFECT_OPT_HPP

#include <optional>
#include <utility>

#include "plbend/propagation.hpp"

namespace plbend {

// Outcome of the corner-detuning optimization at one bend angle.
struct DefectResult {
    double bend_angle = 0.0;
    double detuning = 0.0;     // optimal Delta (1/m)
    double loss_before = 0.0;  // at Delta = 0
    double loss_after = 0.0;
    double detuning_to_coupling_ratio = 0.0;  // |Delta| / G_{C,C+-1}
    double index_change_pct = 0.0;            // 100 (dn - dn_C) / dn
    double size_change_pct = 0.0;             // 100 (sigma - sigma_C) / sigma
    bool scan_unimodal = true;  // false when the pre-scan saw multiple minima
};

// Minimize the bending loss over the corner detuning at fixed geometry.
// Default bracket [-3G, +3G] with G the corner-link PST coupling;
// 64-point pre-scan (unimodality guard), golden-section refinement to
// |dDelta| < 1e-4 1/cm, parabolic polish, one bracket doubling if the
// minimum lands within 1% of an edge.  Never returns a detuning that
// does worse than the undefected chain.
DefectResult optimize_detuning(const LatticeLayout& layout, double wavelength,
                               std::optional<std::pair<double, double>> bracket = std::nullopt);

// Corner refractive-index modification dn_C realizing the detuning:
// root of beta(dn_C) - beta(dn) = Delta over dn_C in (0, 2 dn),
// reported as the relative change 100 (dn - dn_C) / dn.
double detuning_to_index_change(const WaveguideSpec& spec, double wavelength,
                                double detuning);

// Isotropic cross-section scale s realizing the detuning:
// root of beta(s dx, s dy) - beta = Delta over s in (0.5, 1.5),
// reported as the relative change 100 (sigma - s^2 sigma) / sigma.
double detuning_to_size_change(const WaveguideSpec& spec, double wavelength,
                               double detuning);

} // namespace plbend

#endif
