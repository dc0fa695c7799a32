#ifndef PLBEND_PROPAGATION_HPP
#define PLBEND_PROPAGATION_HPP

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "plbend/lattice.hpp"

namespace plbend {

// Modal amplitudes; sum |A_j|^2 = 1 means total input power.
using AmplitudeVector = Eigen::VectorXcd;

// Power bookkeeping at the device exit.
struct TransferReport {
    double bend_angle = 0.0;
    double detuning = 0.0;        // corner detuning Delta (1/m)
    std::vector<double> powers;   // P_j at z = L
    double loss = 0.0;            // 1 - P_N
    bool optimized = false;
};

// A(z) = exp(-i H z) A0 through the eigendecomposition of the real
// symmetric H.  Throws NonHermitianError on asymmetric input.
AmplitudeVector evolve(const Eigen::MatrixXd& hamiltonian, double z,
                       const AmplitudeVector& initial);

// Independent route: fixed-step classic RK4 on dA/dz = -i H A with
// step <= 1e-3 / max|H_{m,l}|.  A positive max_step tightens the cap.
AmplitudeVector evolve_ode(const Eigen::MatrixXd& hamiltonian, double z,
                           const AmplitudeVector& initial, double max_step = 0.0);

std::vector<double> power_distribution(const AmplitudeVector& amplitudes);

// Evolve e_1 to z = L under the layout's Hamiltonian with the given
// corner detuning; report exit powers and the relative loss 1 - P_N.
TransferReport transfer_loss(const LatticeLayout& layout, double detuning,
                             double wavelength);

// Fraction of the input power at the corner site along propagation.
std::vector<std::pair<double, double>> corner_power_trace(const LatticeLayout& layout,
                                                          double detuning,
                                                          std::span<const double> z_grid,
                                                          double wavelength);

// Dense transverse intensity samples (W/m^2 internally; reports W/cm^2).
struct IntensityMap {
    double x0 = 0.0, y0 = 0.0;  // lower-left sample (m)
    double step = 0.0;          // grid step (m)
    int nx = 0, ny = 0;
    std::vector<double> values;  // row-major, ny rows of nx (W/m^2)

    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
    double integrated_power() const;  // trapezoid over the grid (W)
};

// Output intensity (beta/(2 omega mu0)) |sum_j A_j E_j e^{-i beta_j L}|^2
// sampled on a uniform grid covering all sites plus the margin.
// Throws GridTooCoarseError when step > 0.5 um.
IntensityMap output_intensity_map(const LatticeLayout& layout,
                                  const AmplitudeVector& exit_amplitudes,
                                  double grid_step, double margin,
                                  double wavelength);

// Shared helpers for the drivers: evolve with a detuned corner without
// rebuilding the coupling matrix.
Eigen::MatrixXd with_corner_detuning(const LatticeHamiltonian& hamiltonian,
                                     double detuning);

} // namespace plbend

#endif
