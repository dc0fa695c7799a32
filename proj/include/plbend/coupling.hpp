#ifndef PLBEND_COUPLING_HPP
#define PLBEND_COUPLING_HPP

#include <span>
#include <utility>
#include <vector>

#include "plbend/mode_solver.hpp"

namespace plbend {

// Relative placement of two parallel waveguides in the transverse plane.
// Both cross sections share a fixed orientation and both mode factors are
// even, so the coupling depends on the angle only through its fold into
// [0, pi/2]; all consumers fold before evaluation.
struct PairGeometry {
    double separation = 0.0;  // center-to-center r (m), > 0
    double angle = 0.0;       // folded angle of the connecting line vs x (rad)

    static PairGeometry folded(double separation, double angle);
};

// Fold an arbitrary angle into [0, pi/2] using the even-parity symmetry
// theta ~ -theta ~ pi - theta.
double fold_angle(double angle);

// Fitted exponential coupling law J(r) = prefactor * exp(-decay_rate * r)
// at a fixed coupling angle.
struct CouplingLaw {
    double angle = 0.0;             // folded theta (rad)
    double prefactor = 0.0;         // mu (1/m)
    double decay_rate = 0.0;        // xi (1/m)
    double rms_log_residual = 0.0;  // RMS of ln J - fit
    double r_min = 0.0;             // fitted separation range (m)
    double r_max = 0.0;
};

// Evanescent coupling J_{m,l} between two waveguides: the overlap
// integral (omega eps0 / 4) Int E_m* dn_l^2 E_l over the core rectangle
// of waveguide l, with dn_l^2 = n_g^2 - n_s^2 there.  Both profiles are
// separable, so the integral reduces to a product of closed-form 1D
// pieces (cos*cos inside the overlap band, cos*exp against the tails).
// Result in 1/m.  Throws UnnormalizedModeError for unnormalized modes.
double coupling_analytic(const ModeSolution& mode_m, const WaveguideSpec& spec_m,
                         const ModeSolution& mode_l, const WaveguideSpec& spec_l,
                         const PairGeometry& geom);

// Same integral by 2D trapezoidal quadrature over waveguide l's core
// rectangle; the independent numerical route for cross-checking the
// closed form.  Step must be <= 0.02 um.
double coupling_quadrature(const ModeSolution& mode_m, const WaveguideSpec& spec_m,
                           const ModeSolution& mode_l, const WaveguideSpec& spec_l,
                           const PairGeometry& geom, double step = 0.01e-6);

// Least-squares line fit of ln J versus r from precomputed samples.
// Requires >= 5 samples spanning at least a decade of coupling values;
// throws Error if any coupling is <= 0 or non-finite.
CouplingLaw fit_exponential_samples(double angle,
                                    std::span<const double> separations,
                                    std::span<const double> couplings);

// Convenience: evaluate the coupling of two identical waveguides at the
// given separations and fit the exponential law.
CouplingLaw fit_exponential(const ModeSolution& mode, const WaveguideSpec& spec,
                            double angle, std::span<const double> separations);

// Coupling versus angle at fixed separation (identical waveguides).
std::vector<std::pair<double, double>> anisotropy_scan(const WaveguideSpec& spec,
                                                       double wavelength,
                                                       double separation,
                                                       std::span<const double> angles);

} // namespace plbend

#endif
