#include "plbend/propagation.hpp"

#include <cmath>

namespace plbend {

namespace {

void require_symmetric(const Eigen::MatrixXd& h) {
    const double scale = 1.0 + h.cwiseAbs().maxCoeff();
    if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw NonHermitianError("evolution requires a Hermitian (real symmetric) matrix");
}

} // namespace

AmplitudeVector evolve(const Eigen::MatrixXd& hamiltonian, double z,
                       const AmplitudeVector& initial) {
    require_symmetric(hamiltonian);
    if (z < 0.0)
        throw std::invalid_argument("propagation distance must be >= 0");
    if (initial.size() != hamiltonian.rows())
        throw std::invalid_argument("amplitude vector size mismatch");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hamiltonian);
    const Eigen::MatrixXd& v = eig.eigenvectors();
    const Eigen::VectorXd& lambda = eig.eigenvalues();

    Eigen::VectorXcd modal = v.transpose() * initial;
    for (Eigen::Index i = 0; i < modal.size(); ++i)
        modal(i) *= std::exp(std::complex<double>(0.0, -lambda(i) * z));
    return v * modal;
}

AmplitudeVector evolve_ode(const Eigen::MatrixXd& hamiltonian, double z,
                           const AmplitudeVector& initial, double max_step) {
    require_symmetric(hamiltonian);
    if (z < 0.0)
        throw std::invalid_argument("propagation distance must be >= 0");
    if (z == 0.0) return initial;

    const double max_entry = hamiltonian.cwiseAbs().maxCoeff();
    double h_max = (max_entry > 0.0) ? 1e-3 / max_entry : z;
    if (max_step > 0.0) h_max = std::min(h_max, max_step);
    const int steps = std::max(1, static_cast<int>(std::ceil(z / h_max)));
    const double h = z / steps;

    const std::complex<double> minus_i(0.0, -1.0);
    auto rhs = [&](const AmplitudeVector& a) -> AmplitudeVector {
        return minus_i * (hamiltonian * a);
    };

    AmplitudeVector a = initial;
    for (int s = 0; s < steps; ++s) {
        const AmplitudeVector k1 = rhs(a);
        const AmplitudeVector k2 = rhs(a + (0.5 * h) * k1);
        const AmplitudeVector k3 = rhs(a + (0.5 * h) * k2);
        const AmplitudeVector k4 = rhs(a + h * k3);
        a += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return a;
}

std::vector<double> power_distribution(const AmplitudeVector& amplitudes) {
    std::vector<double> powers(static_cast<std::size_t>(amplitudes.size()));
    for (Eigen::Index j = 0; j < amplitudes.size(); ++j)
        powers[static_cast<std::size_t>(j)] = std::norm(amplitudes(j));
    return powers;
}

Eigen::MatrixXd with_corner_detuning(const LatticeHamiltonian& hamiltonian,
                                     double detuning) {
    Eigen::MatrixXd h = hamiltonian.matrix;
    h(hamiltonian.corner, hamiltonian.corner) += detuning;
    return h;
}

TransferReport transfer_loss(const LatticeLayout& layout, double detuning,
                             double wavelength) {
    const LatticeHamiltonian hamiltonian = coupling_matrix(layout, wavelength);
    const Eigen::MatrixXd h = with_corner_detuning(hamiltonian, detuning);

    AmplitudeVector a0 = AmplitudeVector::Zero(layout.count);
    a0(0) = 1.0;
    const AmplitudeVector a = evolve(h, layout.device_length, a0);

    TransferReport report;
    report.bend_angle = layout.bend_angle;
    report.detuning = detuning;
    report.powers = power_distribution(a);
    report.loss = 1.0 - report.powers.back();
    return report;
}

std::vector<std::pair<double, double>> corner_power_trace(const LatticeLayout& layout,
                                                          double detuning,
                                                          std::span<const double> z_grid,
                                                          double wavelength) {
    const LatticeHamiltonian hamiltonian = coupling_matrix(layout, wavelength);
    const Eigen::MatrixXd h = with_corner_detuning(hamiltonian, detuning);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    const Eigen::MatrixXd& v = eig.eigenvectors();
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const Eigen::VectorXd modal0 = v.row(0).transpose();  // V^T e_1

    std::vector<std::pair<double, double>> trace;
    trace.reserve(z_grid.size());
    for (double z : z_grid) {
        std::complex<double> corner_amp(0.0, 0.0);
        for (Eigen::Index i = 0; i < lambda.size(); ++i)
            corner_amp += v(layout.corner, i) * modal0(i) *
                          std::exp(std::complex<double>(0.0, -lambda(i) * z));
        trace.emplace_back(z, std::norm(corner_amp));
    }
    return trace;
}

double IntensityMap::integrated_power() const {
    double sum = 0.0;
    for (int iy = 0; iy <= ny - 1; ++iy) {
        const double wy = (iy == 0 || iy == ny - 1) ? 0.5 : 1.0;
        for (int ix = 0; ix <= nx - 1; ++ix) {
            const double wx = (ix == 0 || ix == nx - 1) ? 0.5 : 1.0;
            sum += wx * wy * at(ix, iy);
        }
    }
    return sum * step * step;
}

IntensityMap output_intensity_map(const LatticeLayout& layout,
                                  const AmplitudeVector& exit_amplitudes,
                                  double grid_step, double margin,
                                  double wavelength) {
    if (!(grid_step > 0.0) || grid_step > 0.5e-6)
        throw GridTooCoarseError("intensity grid step must lie in (0, 0.5 um]");
    if (exit_amplitudes.size() != layout.count)
        throw std::invalid_argument("amplitude vector size mismatch");

    std::vector<ModeSolution> modes(layout.count);
    for (int j = 0; j < layout.count; ++j)
        modes[j] = solve_mode(layout.specs[j], wavelength);

    double xmin = layout.positions[0][0], xmax = xmin;
    double ymin = layout.positions[0][1], ymax = ymin;
    for (const auto& p : layout.positions) {
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
    }
    xmin -= margin;
    xmax += margin;
    ymin -= margin;
    ymax += margin;

    IntensityMap map;
    map.step = grid_step;
    map.x0 = xmin;
    map.y0 = ymin;
    map.nx = static_cast<int>(std::ceil((xmax - xmin) / grid_step)) + 1;
    map.ny = static_cast<int>(std::ceil((ymax - ymin) / grid_step)) + 1;
    map.values.assign(static_cast<std::size_t>(map.nx) * map.ny, 0.0);

    const double beta_ref = layout.betas[0];
    const double mu0 = PhysicalConstants::vacuum_permeability;
    const double omega = modes[0].omega;
    const double intensity_scale = beta_ref / (2.0 * omega * mu0);
    const double z = layout.device_length;

    for (int iy = 0; iy < map.ny; ++iy) {
        const double y = map.y0 + iy * grid_step;
        for (int ix = 0; ix < map.nx; ++ix) {
            const double x = map.x0 + ix * grid_step;
            std::complex<double> field(0.0, 0.0);
            for (int j = 0; j < layout.count; ++j) {
                const double e = field_at(modes[j], layout.specs[j],
                                          x - layout.positions[j][0],
                                          y - layout.positions[j][1]);
                field += exit_amplitudes(j) * e *
                         std::exp(std::complex<double>(0.0, -layout.betas[j] * z));
            }
            map.values[static_cast<std::size_t>(iy) * map.nx + ix] =
                intensity_scale * std::norm(field);
        }
    }
    return map;
}

} // namespace plbend
