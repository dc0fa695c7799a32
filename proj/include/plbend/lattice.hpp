#ifndef PLBEND_LATTICE_HPP
#define PLBEND_LATTICE_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "plbend/coupling.hpp"
#include "plbend/mode_solver.hpp"

namespace plbend {

// Bent chain of waveguides: two straight arms meeting at the corner
// site.  Sites are indexed 0..count-1; the paper-facing convention of
// numbering sites 1..N lives only in reports.
struct LatticeLayout {
    int count = 0;               // N >= 3
    int corner = 0;              // 0-based corner index, interior
    double bend_angle = 0.0;     // theta (rad); 0 = unbent chain
    double device_length = 0.0;  // L (m)

    std::vector<std::array<double, 2>> positions;  // site centers (m)
    std::vector<WaveguideSpec> specs;              // per-site cross sections
    std::vector<double> betas;                     // per-site beta (1/m)
    std::vector<double> link_separations;          // engineered r_{j,j+1} (m)
};

// All-pairs coupling matrix (1/m), symmetric, with diagonal detunings
// beta_j - beta_ref in the frame co-rotating at the common bulk beta.
struct LatticeHamiltonian {
    Eigen::MatrixXd matrix;
    int corner = 0;
    double beta_ref = 0.0;  // 1/m
};

// Nearest-neighbour targets G_{j,j+1} = (pi / 2L) sqrt((N - j) j),
// j = 1..N-1: the centrosymmetric profile whose equidistant spectrum
// transfers an excitation from site 1 to site N exactly at z = L.
std::vector<double> pst_profile(int count, double device_length);

// Ideal tridiagonal Hamiltonian carrying exactly the profile above.
Eigen::MatrixXd pst_hamiltonian(int count, double device_length);

// Separation r realizing the target coupling at the given link angle,
// by bisection on the strictly decreasing tail of J(r) over
// [floor, ceiling].  Converges to 1e-8 relative in the coupling.
// Throws UnreachableTargetError when the target lies outside the range.
double solve_separation(double target, double link_angle,
                        const WaveguideSpec& spec, const ModeSolution& mode,
                        double r_floor = 8e-6, double r_ceiling = 100e-6);

// Place the chain: corner at the origin, first arm along (-1, 0),
// second arm along (cos theta, sin theta), consecutive separations
// engineered against the PST profile with each link's own folded angle.
LatticeLayout build_layout(int count, int corner, double bend_angle,
                           double device_length, const WaveguideSpec& spec,
                           double wavelength,
                           double r_floor = 8e-6, double r_ceiling = 100e-6);

// Couplings for every pair from the layout geometry, plus diagonal
// detunings relative to the common bulk beta.
LatticeHamiltonian coupling_matrix(const LatticeLayout& layout, double wavelength);

// |H_{m,l}| / max off-diagonal |H|, diagonal reported as zero.
// Throws AllZeroMatrixError when every off-diagonal entry vanishes.
Eigen::MatrixXd relative_coupling_map(const LatticeHamiltonian& hamiltonian);

} // namespace plbend

#endif
