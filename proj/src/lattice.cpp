#include "plbend/lattice.hpp"

#include <cmath>
#include <string>

namespace plbend {

std::vector<double> pst_profile(int count, double device_length) {
    if (count < 2)
        throw std::invalid_argument("pst_profile needs at least 2 sites");
    if (!(device_length > 0.0))
        throw std::invalid_argument("device_length must be positive");
    std::vector<double> profile(count - 1);
    const double scale = 0.5 * pi / device_length;
    for (int j = 1; j < count; ++j)
        profile[j - 1] = scale * std::sqrt(static_cast<double>(count - j) * j);
    return profile;
}

Eigen::MatrixXd pst_hamiltonian(int count, double device_length) {
    const auto profile = pst_profile(count, device_length);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(count, count);
    for (int j = 0; j + 1 < count; ++j) {
        h(j, j + 1) = profile[j];
        h(j + 1, j) = profile[j];
    }
    return h;
}

double solve_separation(double target, double link_angle,
                        const WaveguideSpec& spec, const ModeSolution& mode,
                        double r_floor, double r_ceiling) {
    if (!(target > 0.0))
        throw std::invalid_argument("target coupling must be positive");
    const double theta = fold_angle(link_angle);
    auto coupling_at = [&](double r) {
        return coupling_analytic(mode, spec, mode, spec, PairGeometry{r, theta});
    };

    double lo = r_floor;
    double hi = r_ceiling;
    const double j_lo = coupling_at(lo);
    const double j_hi = coupling_at(hi);
    // J(r) decreases on the tail, so the root is bracketed iff the
    // target sits between the endpoint couplings.
    if (target > j_lo)
        throw UnreachableTargetError("target coupling exceeds the value at the separation floor");
    if (target < j_hi)
        throw UnreachableTargetError("target coupling falls below the value at the separation ceiling");

    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double j_mid = coupling_at(mid);
        if (std::abs(j_mid - target) <= 1e-8 * target) return mid;
        if (j_mid > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    throw BracketError("solve_separation failed to converge to 1e-8 relative");
}

LatticeLayout build_layout(int count, int corner, double bend_angle,
                           double device_length, const WaveguideSpec& spec,
                           double wavelength, double r_floor, double r_ceiling) {
    if (count < 3)
        throw std::invalid_argument("layout needs at least 3 sites");
    if (corner <= 0 || corner >= count - 1)
        throw std::invalid_argument("corner must be an interior site");
    if (!(bend_angle >= 0.0 && bend_angle < pi))
        throw std::invalid_argument("bend_angle must lie in [0, pi)");

    const ModeSolution mode = solve_mode(spec, wavelength);
    const auto targets = pst_profile(count, device_length);

    LatticeLayout layout;
    layout.count = count;
    layout.corner = corner;
    layout.bend_angle = bend_angle;
    layout.device_length = device_length;
    layout.positions.assign(count, {0.0, 0.0});
    layout.specs.assign(count, spec);
    layout.betas.assign(count, mode.beta);
    layout.link_separations.assign(count - 1, 0.0);

    // First arm: sites corner-1 .. 0 step along (-1, 0).
    for (int j = corner - 1; j >= 0; --j) {
        const double r = solve_separation(targets[j], 0.0, spec, mode, r_floor, r_ceiling);
        layout.link_separations[j] = r;
        layout.positions[j] = {layout.positions[j + 1][0] - r, layout.positions[j + 1][1]};
    }
    // Second arm: sites corner+1 .. N-1 step along (cos theta, sin theta).
    const double ca = std::cos(bend_angle);
    const double sa = std::sin(bend_angle);
    for (int j = corner; j + 1 < count; ++j) {
        const double r = solve_separation(targets[j], bend_angle, spec, mode, r_floor, r_ceiling);
        layout.link_separations[j] = r;
        layout.positions[j + 1] = {layout.positions[j][0] + r * ca,
                                   layout.positions[j][1] + r * sa};
    }
    return layout;
}

LatticeHamiltonian coupling_matrix(const LatticeLayout& layout, double wavelength) {
    const int n = layout.count;
    LatticeHamiltonian h;
    h.matrix = Eigen::MatrixXd::Zero(n, n);
    h.corner = layout.corner;

    // Modes per site; identical specs share one solution.
    std::vector<ModeSolution> modes(n);
    for (int j = 0; j < n; ++j) {
        bool reused = false;
        for (int i = 0; i < j; ++i) {
            const auto& a = layout.specs[i];
            const auto& b = layout.specs[j];
            if (a.width == b.width && a.height == b.height &&
                a.substrate_index == b.substrate_index && a.index_step == b.index_step) {
                modes[j] = modes[i];
                reused = true;
                break;
            }
        }
        if (!reused) modes[j] = solve_mode(layout.specs[j], wavelength);
    }

    h.beta_ref = layout.betas.empty() ? modes[0].beta : layout.betas[0];
    for (int j = 0; j < n; ++j)
        h.matrix(j, j) = layout.betas[j] - h.beta_ref;

    for (int m = 0; m < n; ++m) {
        for (int l = m + 1; l < n; ++l) {
            const double dx = layout.positions[l][0] - layout.positions[m][0];
            const double dy = layout.positions[l][1] - layout.positions[m][1];
            const double r = std::hypot(dx, dy);
            const double theta = std::atan2(std::abs(dy), std::abs(dx));
            const PairGeometry geom{r, theta};
            double j_ml = coupling_analytic(modes[m], layout.specs[m],
                                            modes[l], layout.specs[l], geom);
            if (layout.specs[m].width != layout.specs[l].width ||
                layout.specs[m].index_step != layout.specs[l].index_step) {
                // Unequal pair: symmetrize the two perturbation choices.
                const double j_lm = coupling_analytic(modes[l], layout.specs[l],
                                                      modes[m], layout.specs[m], geom);
                j_ml = 0.5 * (j_ml + j_lm);
            }
            h.matrix(m, l) = j_ml;
            h.matrix(l, m) = j_ml;
        }
    }
    return h;
}

Eigen::MatrixXd relative_coupling_map(const LatticeHamiltonian& hamiltonian) {
    const auto& m = hamiltonian.matrix;
    const int n = static_cast<int>(m.rows());
    double peak = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) peak = std::max(peak, std::abs(m(i, j)));
    if (!(peak > 0.0))
        throw AllZeroMatrixError("relative map undefined: all off-diagonal couplings vanish");

    Eigen::MatrixXd map = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) map(i, j) = std::abs(m(i, j)) / peak;
    return map;
}

} // namespace plbend
