#include "plbend/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plbend {

double fold_angle(double angle) {
    double t = std::fmod(std::abs(angle), pi);
    return std::min(t, pi - t);
}

PairGeometry PairGeometry::folded(double separation, double angle) {
    if (!(separation > 0.0))
        throw std::invalid_argument("separation must be positive");
    return PairGeometry{separation, fold_angle(angle)};
}

namespace {

// Int_{lo}^{hi} cos(k u) exp(rate u + off) du.  Callers arrange the
// exponent to be <= 0 over the segment, so no overflow.
double segment_cos_exp(double k, double lo, double hi, double rate, double off) {
    const double denom = rate * rate + k * k;
    auto antiderivative = [&](double u) {
        return std::exp(rate * u + off) *
               (rate * std::cos(k * u) + k * std::sin(k * u)) / denom;
    };
    return antiderivative(hi) - antiderivative(lo);
}

// Int_{lo}^{hi} cos(k1 u) cos(k2 (u - d)) du via product-to-sum, written
// with a sinc factor so the k1 == k2 branch stays well conditioned.
double segment_cos_cos(double k1, double k2, double d, double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    auto part = [&](double kappa, double phase) {
        const double x = kappa * half;
        const double sinc = (std::abs(x) < 1e-8) ? 1.0 - x * x / 6.0 : std::sin(x) / x;
        return (hi - lo) * std::cos(kappa * mid + phase) * sinc;
    };
    return 0.5 * (part(k1 + k2, -k2 * d) + part(k1 - k2, k2 * d));
}

// Int_{-a_l}^{a_l} cos(k_l u) X_m(u - d) du where X_m is the 1D profile
// of mode m (cos core, exponential tails).  Split at the points where
// l's core crosses m's core boundaries.
double axis_overlap(double k_l, double a_l,
                    double k_m, double gamma_m, double a_m, double d) {
    d = std::abs(d);
    const double c_m = std::cos(k_m * a_m);
    double total = 0.0;

    // Against m's left tail: u - d < -a_m.
    {
        const double lo = -a_l;
        const double hi = std::min(a_l, d - a_m);
        if (hi > lo)
            total += c_m * segment_cos_exp(k_l, lo, hi, gamma_m, gamma_m * (a_m - d));
    }
    // Across m's core: |u - d| <= a_m.
    {
        const double lo = std::max(-a_l, d - a_m);
        const double hi = std::min(a_l, d + a_m);
        if (hi > lo)
            total += segment_cos_cos(k_l, k_m, d, lo, hi);
    }
    // Against m's right tail: u - d > a_m (only when m sits inside l).
    {
        const double lo = std::max(-a_l, d + a_m);
        const double hi = a_l;
        if (hi > lo)
            total += c_m * segment_cos_exp(k_l, lo, hi, -gamma_m, gamma_m * (a_m + d));
    }
    return total;
}

void check_pair(const ModeSolution& mode_m, const ModeSolution& mode_l,
                const PairGeometry& geom) {
    if (!mode_m.normalized() || !mode_l.normalized())
        throw UnnormalizedModeError("coupling requires power-normalized modes");
    if (std::abs(mode_m.omega - mode_l.omega) > 1e-9 * mode_l.omega)
        throw std::invalid_argument("modes must share the operation wavelength");
    if (!(geom.separation > 0.0))
        throw std::invalid_argument("separation must be positive");
}

} // namespace

double coupling_analytic(const ModeSolution& mode_m, const WaveguideSpec& spec_m,
                         const ModeSolution& mode_l, const WaveguideSpec& spec_l,
                         const PairGeometry& geom) {
    check_pair(mode_m, mode_l, geom);
    const double theta = fold_angle(geom.angle);
    const double dx = geom.separation * std::cos(theta);
    const double dy = geom.separation * std::sin(theta);

    const double sx = axis_overlap(mode_l.kx, 0.5 * spec_l.width,
                                   mode_m.kx, mode_m.gamma_x, 0.5 * spec_m.width, dx);
    const double sy = axis_overlap(mode_l.ky, 0.5 * spec_l.height,
                                   mode_m.ky, mode_m.gamma_y, 0.5 * spec_m.height, dy);

    const double n_g = spec_l.core_index();
    const double n_s = spec_l.substrate_index;
    const double dn2 = n_g * n_g - n_s * n_s;
    const double eps0 = PhysicalConstants::vacuum_permittivity;
    return 0.25 * mode_l.omega * eps0 * dn2 *
           mode_m.amplitude * mode_l.amplitude * sx * sy;
}

double coupling_quadrature(const ModeSolution& mode_m, const WaveguideSpec& spec_m,
                           const ModeSolution& mode_l, const WaveguideSpec& spec_l,
                           const PairGeometry& geom, double step) {
    check_pair(mode_m, mode_l, geom);
    if (!(step > 0.0) || step > 0.02e-6)
        throw std::invalid_argument("quadrature step must lie in (0, 0.02 um]");

    const double theta = fold_angle(geom.angle);
    const double dx = geom.separation * std::cos(theta);
    const double dy = geom.separation * std::sin(theta);

    const int nx = std::max(1, static_cast<int>(std::ceil(spec_l.width / step)));
    const int ny = std::max(1, static_cast<int>(std::ceil(spec_l.height / step)));
    const double hx = spec_l.width / nx;
    const double hy = spec_l.height / ny;
    const double x0 = -0.5 * spec_l.width;
    const double y0 = -0.5 * spec_l.height;

    // 2D trapezoid over l's core rectangle.
    double sum = 0.0;
    for (int i = 0; i <= nx; ++i) {
        const double u = x0 + i * hx;
        const double wx = (i == 0 || i == nx) ? 0.5 : 1.0;
        double row = 0.0;
        for (int j = 0; j <= ny; ++j) {
            const double v = y0 + j * hy;
            const double wy = (j == 0 || j == ny) ? 0.5 : 1.0;
            row += wy * field_at(mode_m, spec_m, u - dx, v - dy) *
                   field_at(mode_l, spec_l, u, v);
        }
        sum += wx * row;
    }
    sum *= hx * hy;

    const double n_g = spec_l.core_index();
    const double n_s = spec_l.substrate_index;
    const double dn2 = n_g * n_g - n_s * n_s;
    const double eps0 = PhysicalConstants::vacuum_permittivity;
    return 0.25 * mode_l.omega * eps0 * dn2 * sum;
}

CouplingLaw fit_exponential_samples(double angle,
                                    std::span<const double> separations,
                                    std::span<const double> couplings) {
    if (separations.size() != couplings.size())
        throw std::invalid_argument("separations and couplings must have equal length");
    if (separations.size() < 5)
        throw std::invalid_argument("exponential fit needs at least 5 samples");

    double jmin = std::numeric_limits<double>::infinity();
    double jmax = 0.0;
    for (double j : couplings) {
        if (!(j > 0.0) || !std::isfinite(j))
            throw Error("exponential fit: coupling sample <= 0 or non-finite");
        jmin = std::min(jmin, j);
        jmax = std::max(jmax, j);
    }
    if (jmax < 10.0 * jmin)
        throw std::invalid_argument("exponential fit needs a decade of coupling values");

    const auto n = static_cast<double>(separations.size());
    double sr = 0.0, sl = 0.0, srr = 0.0, srl = 0.0;
    for (std::size_t i = 0; i < separations.size(); ++i) {
        const double r = separations[i];
        const double l = std::log(couplings[i]);
        sr += r;
        sl += l;
        srr += r * r;
        srl += r * l;
    }
    const double denom = n * srr - sr * sr;
    const double slope = (n * srl - sr * sl) / denom;
    const double intercept = (sl - slope * sr) / n;

    double ss = 0.0;
    for (std::size_t i = 0; i < separations.size(); ++i) {
        const double resid = std::log(couplings[i]) - (intercept + slope * separations[i]);
        ss += resid * resid;
    }

    CouplingLaw law;
    law.angle = fold_angle(angle);
    law.prefactor = std::exp(intercept);
    law.decay_rate = -slope;
    law.rms_log_residual = std::sqrt(ss / n);
    const auto [lo, hi] = std::minmax_element(separations.begin(), separations.end());
    law.r_min = *lo;
    law.r_max = *hi;
    return law;
}

CouplingLaw fit_exponential(const ModeSolution& mode, const WaveguideSpec& spec,
                            double angle, std::span<const double> separations) {
    std::vector<double> couplings(separations.size());
    for (std::size_t i = 0; i < separations.size(); ++i) {
        const auto geom = PairGeometry::folded(separations[i], angle);
        couplings[i] = coupling_analytic(mode, spec, mode, spec, geom);
    }
    return fit_exponential_samples(angle, separations, couplings);
}

std::vector<std::pair<double, double>> anisotropy_scan(const WaveguideSpec& spec,
                                                       double wavelength,
                                                       double separation,
                                                       std::span<const double> angles) {
    const ModeSolution mode = solve_mode(spec, wavelength);
    std::vector<std::pair<double, double>> scan;
    scan.reserve(angles.size());
    for (double theta : angles) {
        const auto geom = PairGeometry::folded(separation, theta);
        scan.emplace_back(theta, coupling_analytic(mode, spec, mode, spec, geom));
    }
    return scan;
}

} // namespace plbend
