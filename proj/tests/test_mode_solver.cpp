#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"

using namespace plbend;
using namespace plbend::testing;

namespace {

// Independent root oracle: dense sign-change scan of the raw matching
// function tan(k a) - gamma/k over the open bracket, refined by
// bisection on the same function.  No code shared with the solver.
double dense_scan_root(double extent, double k, double n_g, double n_s) {
    const double K = k * std::sqrt(n_g * n_g - n_s * n_s);
    const double hi = std::min(pi / extent, K) * (1.0 - 1e-12);
    const double lo = hi * 1e-9;
    auto f = [&](double kt) {
        const double gamma = std::sqrt(std::max(K * K - kt * kt, 0.0));
        return std::tan(0.5 * kt * extent) - gamma / kt;
    };
    const int n = 100000;
    double a = 0.0, b = 0.0;
    double prev = f(lo);
    for (int i = 1; i <= n; ++i) {
        const double kt = lo + (hi - lo) * i / n;
        const double cur = f(kt);
        if (prev < 0.0 && cur >= 0.0) {
            a = lo + (hi - lo) * (i - 1) / n;
            b = kt;
            break;
        }
        prev = cur;
    }
    REQUIRE(b > 0.0);
    while (b - a > 1e-13 * b) {
        const double mid = 0.5 * (a + b);
        if (f(mid) < 0.0) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

TEST_CASE("transverse wavenumber matches the dense-scan oracle") {
    const auto spec = asymmetric_spec();
    const double k = 2.0 * pi / kWavelength;
    const double n_g = spec.core_index();
    const double n_s = spec.substrate_index;

    const double kx = transverse_wavenumber(spec.width, k, n_g, n_s);
    const double oracle_x = dense_scan_root(spec.width, k, n_g, n_s);
    CHECK(std::abs(kx - oracle_x) <= 1e-10 * oracle_x);

    const double ky = transverse_wavenumber(spec.height, k, n_g, n_s);
    const double oracle_y = dense_scan_root(spec.height, k, n_g, n_s);
    CHECK(std::abs(ky - oracle_y) <= 1e-10 * oracle_y);

    // Tighter confinement in the minor direction forces a larger root.
    CHECK(ky > kx);

    // Residual of the matching condition itself.
    const double K2 = k * k * (n_g * n_g - n_s * n_s);
    const double gx = std::sqrt(K2 - kx * kx);
    const double matching = std::tan(0.5 * kx * spec.width) - gx / kx;
    CHECK(std::abs(matching) <= 1e-10 * (gx / kx));
}

TEST_CASE("no guided mode without index contrast") {
    const double k = 2.0 * pi / kWavelength;
    CHECK_THROWS_AS(transverse_wavenumber(6e-6, k, 1.444, 1.444), NoGuidedModeError);
    CHECK_THROWS_AS(transverse_wavenumber(6e-6, k, 1.443, 1.444), NoGuidedModeError);
}

TEST_CASE("solved mode reproduces the reference propagation constant") {
    const auto mode = solve_mode(asymmetric_spec(), kWavelength);
    const double beta_per_cm = per_cm_from_per_m(mode.beta);
    CHECK(std::abs(beta_per_cm - 11.3392e4) / 11.3392e4 < 0.002);

    // Dispersion residuals.
    const double n_g = asymmetric_spec().core_index();
    const double K2 = mode.k * mode.k * (n_g * n_g - 1.444 * 1.444);
    CHECK(std::abs(mode.gamma_x * mode.gamma_x + mode.kx * mode.kx - K2) <= 1e-10 * K2);
    CHECK(std::abs(mode.gamma_y * mode.gamma_y + mode.ky * mode.ky - K2) <= 1e-10 * K2);
    CHECK(mode.kx > 0.0);
    CHECK(mode.ky > 0.0);
    CHECK(mode.gamma_x > 0.0);
    CHECK(mode.gamma_y > 0.0);
}

TEST_CASE("guidance bounds") {
    // Square cross section: strictly guided between the substrate and
    // core lines.
    const auto sym = solve_mode(symmetric_spec(), kWavelength);
    CHECK(sym.beta > sym.k * 1.444);
    CHECK(sym.beta < sym.k * symmetric_spec().core_index());

    // The thin asymmetric section sits just below the substrate line:
    // a known artifact of the separable approximation near cutoff.
    const auto asym = solve_mode(asymmetric_spec(), kWavelength);
    CHECK(asym.beta < asym.k * asymmetric_spec().core_index());
    CHECK(asym.beta > asym.k * 1.444 * (1.0 - 1e-3));
}

TEST_CASE("square cross section gives equal transverse parameters") {
    const auto mode = solve_mode(symmetric_spec(), kWavelength);
    CHECK(mode.kx == mode.ky);
    CHECK(mode.gamma_x == mode.gamma_y);
}

TEST_CASE("field profile: center peak, interface continuity, parity") {
    const auto spec = asymmetric_spec();
    const auto mode = solve_mode(spec, kWavelength);

    const double center = field_at(mode, spec, 0.0, 0.0);
    CHECK(center == mode.amplitude);
    for (double x : {-8e-6, -3e-6, -1e-6, 1e-6, 2.5e-6, 7e-6})
        for (double y : {-3e-6, -1e-6, 0.5e-6, 2e-6}) {
            CHECK(std::abs(field_at(mode, spec, x, y)) < std::abs(center));
            CHECK(field_at(mode, spec, x, y) ==
                  doctest::Approx(field_at(mode, spec, -x, -y)).epsilon(1e-14));
        }

    // Value continuity at the core edge: inner and outer branch agree.
    const double a = 0.5 * spec.width;
    const double inner = mode.amplitude * std::cos(mode.kx * a) *
                         std::cos(mode.ky * 0.0);
    CHECK(field_at(mode, spec, a, 0.0) == doctest::Approx(inner).epsilon(1e-12));
}

TEST_CASE("first transverse derivative is continuous across the interfaces") {
    const auto spec = asymmetric_spec();
    const auto mode = solve_mode(spec, kWavelength);
    const double h = 1e-10;  // 1e-4 um

    auto check_interface = [&](auto f, double t0) {
        // Second-order one-sided differences from each side.
        const double inward = (3.0 * f(t0) - 4.0 * f(t0 - h) + f(t0 - 2.0 * h)) / (2.0 * h);
        const double outward = (-3.0 * f(t0) + 4.0 * f(t0 + h) - f(t0 + 2.0 * h)) / (2.0 * h);
        CHECK(std::abs(inward - outward) <= 1e-6 * std::abs(inward));
    };
    check_interface([&](double x) { return field_at(mode, spec, x, 0.0); },
                    0.5 * spec.width);
    check_interface([&](double y) { return field_at(mode, spec, 0.0, y); },
                    0.5 * spec.height);
}

TEST_CASE("power normalization agrees with 2D quadrature") {
    const auto spec = asymmetric_spec();
    const auto mode = solve_mode(spec, kWavelength);
    CHECK(mode.amplitude > 0.0);

    // P = (beta / 2 omega mu0) Int |E|^2 over a box reaching 10 decay
    // lengths past the core, trapezoid at 0.05 um.
    const double half_x = 0.5 * spec.width + 10.0 / mode.gamma_x;
    const double half_y = 0.5 * spec.height + 10.0 / mode.gamma_y;
    const double step = 0.05e-6;
    const int nx = static_cast<int>(std::ceil(2.0 * half_x / step));
    const int ny = static_cast<int>(std::ceil(2.0 * half_y / step));
    const double hx = 2.0 * half_x / nx;
    const double hy = 2.0 * half_y / ny;
    double sum = 0.0;
    for (int i = 0; i <= nx; ++i) {
        const double x = -half_x + i * hx;
        const double wx = (i == 0 || i == nx) ? 0.5 : 1.0;
        double row = 0.0;
        for (int j = 0; j <= ny; ++j) {
            const double y = -half_y + j * hy;
            const double wy = (j == 0 || j == ny) ? 0.5 : 1.0;
            const double e = field_at(mode, spec, x, y);
            row += wy * e * e;
        }
        sum += wx * row;
    }
    sum *= hx * hy;
    const double power = mode.beta /
                         (2.0 * mode.omega * PhysicalConstants::vacuum_permeability) * sum;
    CHECK(std::abs(power - 1.0) < 1e-6);

    // Doubling the amplitude quadruples the carried power.
    ModeSolution doubled = mode;
    doubled.amplitude *= 2.0;
    double sum2 = 0.0;
    for (int i = 0; i <= nx; ++i) {
        const double x = -half_x + i * hx;
        const double wx = (i == 0 || i == nx) ? 0.5 : 1.0;
        for (int j = 0; j <= ny; ++j) {
            const double y = -half_y + j * hy;
            const double wy = (j == 0 || j == ny) ? 0.5 : 1.0;
            const double e = field_at(doubled, spec, x, y);
            sum2 += wx * wy * e * e;
        }
    }
    sum2 *= hx * hy;
    const double power_doubled = mode.beta /
                                 (2.0 * mode.omega * PhysicalConstants::vacuum_permeability) *
                                 sum2;
    CHECK(power_doubled == doctest::Approx(4.0 * power).epsilon(1e-12));
}

TEST_CASE("monotonicity on the operating branch") {
    // beta rises with the index step above the weak-guidance dip.
    double prev_beta = 0.0;
    for (double dn : {0.8e-3, 1e-3, 1.5e-3, 2e-3, 3e-3}) {
        const auto mode = solve_mode(WaveguideSpec::rectangular_um(6, 2, 1.444, dn),
                                     kWavelength);
        if (prev_beta > 0.0) CHECK(mode.beta > prev_beta);
        prev_beta = mode.beta;
    }
    // Wider cores relax the transverse wavenumber.
    double prev_kx = 1e300;
    for (double dx_um : {4.0, 5.0, 6.0, 8.0, 10.0}) {
        const auto mode = solve_mode(WaveguideSpec::rectangular_um(dx_um, 2, 1.444, 1e-3),
                                     kWavelength);
        CHECK(mode.kx < prev_kx);
        prev_kx = mode.kx;
    }
}

TEST_CASE("arctan matching form is selectable and distinct") {
    const auto spec = asymmetric_spec();
    const double k = 2.0 * pi / kWavelength;
    const double n_g = spec.core_index();

    const double k_dc = transverse_wavenumber(spec.width, k, n_g, 1.444);
    const double k_at = transverse_wavenumber(spec.width, k, n_g, 1.444,
                                              MatchingForm::arctan_literal);
    CHECK(std::abs(k_at - k_dc) > 1e-3 * k_dc);

    // The literal form satisfies its own equation.
    const double K2 = k * k * (n_g * n_g - 1.444 * 1.444);
    const double gamma = std::sqrt(K2 - k_at * k_at);
    CHECK(k_at * spec.width ==
          doctest::Approx(std::atan(gamma / k_at)).epsilon(1e-10));
}

TEST_CASE("waveguide spec validation") {
    WaveguideSpec spec = asymmetric_spec();
    spec.width = -1.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = asymmetric_spec();
    spec.height = 8e-6;  // taller than wide
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = asymmetric_spec();
    spec.index_step = 0.6;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = asymmetric_spec();
    spec.index_step = 0.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("physical constants are consistent") {
    const double c2 = 1.0 / (PhysicalConstants::vacuum_permittivity *
                             PhysicalConstants::vacuum_permeability);
    const double c = PhysicalConstants::speed_of_light;
    CHECK(std::abs(c2 - c * c) <= 1e-9 * c * c);
}

TEST_CASE("mode cutoff raises") {
    // High contrast on a tiny square: both transverse roots crowd the
    // free limit K and beta^2 = k^2 n_g^2 - kx^2 - ky^2 goes negative.
    const auto spec = WaveguideSpec::rectangular_um(0.02, 0.02, 1.444, 0.45);
    CHECK_THROWS_AS(solve_mode(spec, kWavelength), ModeCutoffError);
}
