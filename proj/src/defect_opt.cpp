#include "plbend/defect_opt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace plbend {

namespace {

double exit_loss(const LatticeHamiltonian& hamiltonian, double device_length,
                 double detuning) {
    const Eigen::MatrixXd h = with_corner_detuning(hamiltonian, detuning);
    AmplitudeVector a0 = AmplitudeVector::Zero(h.rows());
    a0(0) = 1.0;
    const AmplitudeVector a = evolve(h, device_length, a0);
    return 1.0 - std::norm(a(a.size() - 1));
}

// Golden-section minimization of f over [lo, hi] to the given interval
// width, followed by a few parabolic polish steps.
double minimize_scalar(const std::function<double(double)>& f, double lo, double hi,
                       double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    double best = (f1 < f2) ? x1 : x2;
    double fbest = std::min(f1, f2);

    // Parabolic refinement through (a, best, b).
    for (int it = 0; it < 3; ++it) {
        const double fa = f(a), fb = f(b);
        const double denom = (best - a) * (fbest - fb) - (best - b) * (fbest - fa);
        if (denom == 0.0) break;
        const double num = (best - a) * (best - a) * (fbest - fb) -
                           (best - b) * (best - b) * (fbest - fa);
        const double cand = best - 0.5 * num / denom;
        if (!(cand > a && cand < b)) break;
        const double fc = f(cand);
        if (fc < fbest) {
            best = cand;
            fbest = fc;
        } else {
            break;
        }
    }
    return best;
}

} // namespace

DefectResult optimize_detuning(const LatticeLayout& layout, double wavelength,
                               std::optional<std::pair<double, double>> bracket) {
    const LatticeHamiltonian hamiltonian = coupling_matrix(layout, wavelength);
    const auto targets = pst_profile(layout.count, layout.device_length);
    const double corner_coupling =
        std::max(targets[layout.corner - 1], targets[layout.corner]);

    double lo, hi;
    if (bracket) {
        lo = bracket->first;
        hi = bracket->second;
        if (!(lo < hi)) throw std::invalid_argument("detuning bracket must have lo < hi");
    } else {
        lo = -3.0 * corner_coupling;
        hi = 3.0 * corner_coupling;
    }

    auto loss_at = [&](double delta) {
        return exit_loss(hamiltonian, layout.device_length, delta);
    };

    constexpr int scan_points = 64;
    bool unimodal = true;
    int best_index = 0;
    std::vector<double> grid(scan_points), values(scan_points);

    for (int attempt = 0; attempt < 2; ++attempt) {
        for (int i = 0; i < scan_points; ++i) {
            grid[i] = lo + (hi - lo) * i / (scan_points - 1);
            values[i] = loss_at(grid[i]);
        }
        best_index = static_cast<int>(std::min_element(values.begin(), values.end()) -
                                      values.begin());

        // Count interior minima that dip more than 1e-3 below both
        // enclosing ridges.
        int significant = 0;
        for (int i = 1; i + 1 < scan_points; ++i) {
            if (!(values[i] < values[i - 1] && values[i] <= values[i + 1])) continue;
            double left_ridge = values[i];
            for (int l = i - 1; l >= 0; --l) left_ridge = std::max(left_ridge, values[l]);
            double right_ridge = values[i];
            for (int r = i + 1; r < scan_points; ++r) right_ridge = std::max(right_ridge, values[r]);
            if (left_ridge - values[i] > 1e-3 && right_ridge - values[i] > 1e-3)
                ++significant;
        }
        unimodal = significant <= 1;

        // Double the bracket once if the minimum hugs an edge.
        const double edge_band = 0.01 * (hi - lo);
        const bool at_edge = (grid[best_index] - lo) < edge_band ||
                             (hi - grid[best_index]) < edge_band;
        if (!at_edge || attempt == 1) break;
        const double center = 0.5 * (lo + hi);
        const double half = hi - center;
        lo = center - 2.0 * half;
        hi = center + 2.0 * half;
    }

    const double search_lo = grid[std::max(0, best_index - 1)];
    const double search_hi = grid[std::min(scan_points - 1, best_index + 1)];
    const double tol = per_m_from_per_cm(1e-4);
    double delta = minimize_scalar(loss_at, search_lo, search_hi, tol);

    DefectResult result;
    result.bend_angle = layout.bend_angle;
    result.scan_unimodal = unimodal;
    result.loss_before = loss_at(0.0);
    double loss_after = loss_at(delta);
    if (loss_after > result.loss_before) {
        // The optimizer never worsens the undefected chain.
        delta = 0.0;
        loss_after = result.loss_before;
    }
    result.detuning = delta;
    result.loss_after = loss_after;
    result.detuning_to_coupling_ratio = std::abs(delta) / corner_coupling;
    result.index_change_pct =
        detuning_to_index_change(layout.specs[layout.corner], wavelength, delta);
    result.size_change_pct =
        detuning_to_size_change(layout.specs[layout.corner], wavelength, delta);
    return result;
}

namespace {

// Monotone root solve of objective(p) = 0 over [lo, hi]; the objective
// must be increasing in p.  Returns the root parameter.
double bisect_increasing(const std::function<double(double)>& objective,
                         double lo, double hi, const char* what) {
    double flo = objective(lo);
    double fhi = objective(hi);
    if (flo > 0.0 || fhi < 0.0)
        throw UnreachableTargetError(std::string(what) +
                                     ": detuning outside the achievable range");
    for (int it = 0; it < 100 && (hi - lo) > 1e-15 * std::max(std::abs(lo), std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (objective(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

double detuning_to_index_change(const WaveguideSpec& spec, double wavelength,
                                double detuning) {
    if (detuning == 0.0) return 0.0;
    const double beta_bulk = solve_mode(spec, wavelength).beta;
    const double dn = spec.index_step;
    auto objective = [&](double dn_c) {
        WaveguideSpec corner = spec;
        corner.index_step = dn_c;
        return solve_mode(corner, wavelength).beta - beta_bulk - detuning;
    };

    // beta(dn_c) is monotone only on the operating branch: in the deep
    // weak-guidance regime it dips below the substrate line before
    // rising again.  Expand a bracket away from dn, stopping when the
    // objective crosses zero; leaving the monotone branch (the objective
    // stops moving toward the target) means the detuning is unreachable.
    const double dir = (detuning > 0.0) ? 1.0 : -1.0;
    double near = dn;
    double far = dn;
    double f_far = -detuning;  // objective(dn)
    double step = 0.01 * dn;
    while (f_far * detuning < 0.0) {
        const double cand = far + dir * step;
        step *= 2.0;
        if (cand <= 0.0 || cand >= 2.0 * dn)
            throw UnreachableTargetError(
                "index mapping: detuning outside the achievable range");
        double f;
        try {
            f = objective(cand);
        } catch (const ModeCutoffError&) {
            throw UnreachableTargetError(
                "index mapping: corner mode cut off before reaching the detuning");
        }
        if (dir * (f - f_far) <= 0.0)
            throw UnreachableTargetError(
                "index mapping: detuning beyond the monotone branch");
        near = far;
        far = cand;
        f_far = f;
    }

    const double lo = std::min(near, far);
    const double hi = std::max(near, far);
    const double dn_c = bisect_increasing(objective, lo, hi, "index mapping");
    return 100.0 * (dn - dn_c) / dn;
}

double detuning_to_size_change(const WaveguideSpec& spec, double wavelength,
                               double detuning) {
    if (detuning == 0.0) return 0.0;
    const double beta_bulk = solve_mode(spec, wavelength).beta;
    auto objective = [&](double s) {
        WaveguideSpec corner = spec;
        corner.width = s * spec.width;
        corner.height = s * spec.height;
        return solve_mode(corner, wavelength).beta - beta_bulk - detuning;
    };
    const double s = bisect_increasing(objective, 0.5, 1.5, "size mapping");
    return 100.0 * (1.0 - s * s);
}

} // namespace plbend
