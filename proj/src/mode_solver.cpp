#include "plbend/mode_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace plbend {

double WaveguideSpec::core_index() const {
    return substrate_index / std::sqrt(1.0 - 2.0 * index_step);
}

void WaveguideSpec::validate() const {
    if (!(width > 0.0))
        throw std::invalid_argument("width must be positive");
    if (!(height > 0.0))
        throw std::invalid_argument("height must be positive");
    if (width < height)
        throw std::invalid_argument("width must be >= height (major axis along x)");
    if (!(substrate_index > 0.0))
        throw std::invalid_argument("substrate_index must be positive");
    if (!(index_step > 0.0 && index_step < 0.5))
        throw std::invalid_argument("index_step must lie in (0, 1/2)");
}

WaveguideSpec WaveguideSpec::rectangular_um(double width_um, double height_um,
                                            double substrate_index, double index_step) {
    WaveguideSpec spec;
    spec.width = m_from_um(width_um);
    spec.height = m_from_um(height_um);
    spec.substrate_index = substrate_index;
    spec.index_step = index_step;
    return spec;
}

namespace {

// Pole-free form of tan(k a) = gamma/k: g(k) = k sin(k a) - gamma cos(k a).
// Shares the root, changes sign once across it inside the bracket.
struct DispersionFn {
    double a;        // core phase half-length (extent/2 or extent)
    double K2;       // k^2 (n_g^2 - n_s^2)
    MatchingForm form;

    double gamma(double kt) const { return std::sqrt(std::max(K2 - kt * kt, 0.0)); }

    double value(double kt) const {
        const double g = gamma(kt);
        if (form == MatchingForm::derivative_continuity)
            return kt * std::sin(kt * a) - g * std::cos(kt * a);
        return kt * a - std::atan2(g, kt);
    }

    double derivative(double kt) const {
        const double g = gamma(kt);
        if (form == MatchingForm::derivative_continuity) {
            // d gamma / d k = -k / gamma
            const double s = std::sin(kt * a);
            const double c = std::cos(kt * a);
            double d = s + kt * a * c + g * a * s;
            if (g > 0.0) d += (kt / g) * c;
            return d;
        }
        return (g > 0.0) ? a + 1.0 / g : a;
    }
};

} // namespace

double transverse_wavenumber(double extent, double k, double core_index,
                             double substrate_index, MatchingForm form) {
    if (!(extent > 0.0))
        throw std::invalid_argument("extent must be positive");
    if (!(k > 0.0))
        throw std::invalid_argument("free-space wavenumber must be positive");

    const double K2 = k * k * (core_index * core_index - substrate_index * substrate_index);
    if (!(K2 > 0.0))
        throw NoGuidedModeError("no guided mode: k^2 (n_g^2 - n_s^2) <= 0");
    const double K = std::sqrt(K2);

    DispersionFn fn;
    fn.K2 = K2;
    fn.form = form;

    // The fundamental even mode keeps the core phase below pi/2.
    double hi;
    if (form == MatchingForm::derivative_continuity) {
        fn.a = 0.5 * extent;
        hi = std::min(pi / extent, K);
    } else {
        fn.a = extent;
        hi = std::min(0.5 * pi / extent, K);
    }
    double lo = hi * 1e-12;
    hi *= (1.0 - 1e-14);

    double flo = fn.value(lo);
    double fhi = fn.value(hi);
    if (!(flo < 0.0 && fhi > 0.0))
        throw BracketError("transverse matching condition: no sign change in bracket");

    // Bisection to 1e-12 relative.
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        mid = 0.5 * (lo + hi);
        const double fm = fn.value(mid);
        if (fm < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double root = 0.5 * (lo + hi);

    // Two Newton polish steps; keep the bisection result if a step
    // escapes the bracket or the derivative degenerates.
    for (int it = 0; it < 2; ++it) {
        const double d = fn.derivative(root);
        if (!(std::abs(d) > 0.0)) break;
        const double next = root - fn.value(root) / d;
        if (!(next > lo && next < hi) || !std::isfinite(next)) break;
        root = next;
    }
    return root;
}

ModeSolution solve_mode(const WaveguideSpec& spec, double wavelength, MatchingForm form) {
    spec.validate();
    if (!(wavelength > 0.0))
        throw std::invalid_argument("wavelength must be positive");

    const double n_g = spec.core_index();
    const double n_s = spec.substrate_index;
    const double k = 2.0 * pi / wavelength;
    const double K2 = k * k * (n_g * n_g - n_s * n_s);

    ModeSolution mode;
    mode.k = k;
    mode.omega = k * PhysicalConstants::speed_of_light;
    mode.kx = transverse_wavenumber(spec.width, k, n_g, n_s, form);
    mode.ky = transverse_wavenumber(spec.height, k, n_g, n_s, form);
    mode.gamma_x = std::sqrt(K2 - mode.kx * mode.kx);
    mode.gamma_y = std::sqrt(K2 - mode.ky * mode.ky);

    const double beta2 = k * k * n_g * n_g - mode.kx * mode.kx - mode.ky * mode.ky;
    if (!(beta2 > 0.0))
        throw ModeCutoffError("mode cut off: k^2 n_g^2 - kx^2 - ky^2 <= 0");
    mode.beta = std::sqrt(beta2);

    mode.amplitude = normalize_power(mode, spec);
    return mode;
}

namespace {

// 1D profile factor: cos in the core, matched exponential tail outside.
double profile_factor(double t, double k_t, double gamma_t, double half_extent) {
    const double at = std::abs(t);
    if (at <= half_extent) return std::cos(k_t * t);
    return std::cos(k_t * half_extent) * std::exp(-gamma_t * (at - half_extent));
}

} // namespace

double field_at(const ModeSolution& mode, const WaveguideSpec& spec, double x, double y) {
    return mode.amplitude *
           profile_factor(x, mode.kx, mode.gamma_x, 0.5 * spec.width) *
           profile_factor(y, mode.ky, mode.gamma_y, 0.5 * spec.height);
}

double profile_square_integral(double k_t, double gamma_t, double extent) {
    const double a = 0.5 * extent;
    const double c = std::cos(k_t * a);
    return a + std::sin(2.0 * k_t * a) / (2.0 * k_t) + c * c / gamma_t;
}

double normalize_power(const ModeSolution& mode, const WaveguideSpec& spec) {
    // P = (beta / (2 omega mu0)) * amplitude^2 * Ix * Iy = 1 W, using
    // Ex = (omega mu0 / beta) Hy for the quasi-TE mode.
    const double ix = profile_square_integral(mode.kx, mode.gamma_x, spec.width);
    const double iy = profile_square_integral(mode.ky, mode.gamma_y, spec.height);
    const double mu0 = PhysicalConstants::vacuum_permeability;
    return std::sqrt(2.0 * mode.omega * mu0 / (mode.beta * ix * iy));
}

} // namespace plbend
