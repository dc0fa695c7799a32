#ifndef PLBEND_MODE_SOLVER_HPP
#define PLBEND_MODE_SOLVER_HPP

#include "plbend/constants.hpp"
#include "plbend/errors.hpp"

namespace plbend {

// Geometry and refractive-index description of a buried rectangular
// waveguide (Marcatili model: core n_g inside a dx-by-dy rectangle,
// substrate n_s everywhere else, corner regions approximated by n_s).
struct WaveguideSpec {
    double width = 0.0;            // dx, extent along x (m); major axis
    double height = 0.0;           // dy, extent along y (m)
    double substrate_index = 0.0;  // n_s
    double index_step = 0.0;       // dn, with n_g = n_s / sqrt(1 - 2 dn)

    double core_index() const;
    double cross_section() const { return width * height; }  // sigma (m^2)

    // Throws std::invalid_argument naming the offending field.
    void validate() const;

    static WaveguideSpec rectangular_um(double width_um, double height_um,
                                        double substrate_index, double index_step);
};

// Lowest guided mode (E11) of an isolated rectangular waveguide.
// The transverse profile is separable: cosine in the core, matched
// exponential tails outside, in each direction independently.
struct ModeSolution {
    double kx = 0.0;       // transverse wavenumber along x (1/m)
    double ky = 0.0;       // transverse wavenumber along y (1/m)
    double gamma_x = 0.0;  // tail decay constant along x (1/m)
    double gamma_y = 0.0;  // tail decay constant along y (1/m)
    double beta = 0.0;     // propagation constant (1/m)
    double k = 0.0;        // free-space wavenumber 2 pi / lambda (1/m)
    double omega = 0.0;    // angular frequency (rad/s)

    // Peak electric field (V/m) fixing the carried power to 1 W.
    // Zero means "not normalized yet".
    double amplitude = 0.0;

    bool normalized() const { return amplitude > 0.0; }
};

// Transverse matching condition used by the root solve.  Continuity of
// the field and its derivative at the core boundary gives
//     tan(k_t * extent / 2) = gamma_t / k_t,
// which is the default.  The arctan form
//     k_t * extent = arctan(gamma_t / k_t)
// circulating in parts of the literature disagrees with derivative
// continuity of the cos/exp profile by a factor of two in the core
// phase; it is kept selectable for comparison only.
enum class MatchingForm {
    derivative_continuity,
    arctan_literal,
};

// Smallest positive root k_t of the symmetric-mode matching condition,
// located inside (0, min(pi/extent, k*sqrt(n_g^2 - n_s^2))).
// Bisection to 1e-12 relative, then two Newton polish steps.
// Throws NoGuidedModeError when k^2 (n_g^2 - n_s^2) <= 0 and
// BracketError when no sign change brackets the root.
double transverse_wavenumber(double extent, double k, double core_index,
                             double substrate_index,
                             MatchingForm form = MatchingForm::derivative_continuity);

// Full mode solve: per-axis transverse wavenumbers and decay constants,
// beta = sqrt(k^2 n_g^2 - kx^2 - ky^2), and 1 W power normalization.
//
// Note: for weakly guided asymmetric cross sections the separable model
// can place beta marginally below k*n_s (sub-percent); this is a known
// artifact of the approximation near cutoff and is not treated as an
// error.  Only beta^2 <= 0 raises ModeCutoffError.
ModeSolution solve_mode(const WaveguideSpec& spec, double wavelength,
                        MatchingForm form = MatchingForm::derivative_continuity);

// Scalar E-field profile amplitude * X(x) * Y(y) at a point relative to
// the waveguide center.  Total over the plane; even in both arguments.
double field_at(const ModeSolution& mode, const WaveguideSpec& spec,
                double x, double y);

// Amplitude such that the carried power (omega mu0 / 2 beta) * Int |Hy|^2
// equals 1 W, from the closed-form 1D integrals of cos^2 and exp tails.
double normalize_power(const ModeSolution& mode, const WaveguideSpec& spec);

// Closed-form integral of the squared 1D profile factor
// Int X(t)^2 dt = a + sin(2 k a)/(2 k) + cos^2(k a)/gamma, a = extent/2.
double profile_square_integral(double k_t, double gamma_t, double extent);

} // namespace plbend

#endif
