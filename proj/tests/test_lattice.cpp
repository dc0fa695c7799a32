#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"

using namespace plbend;
using namespace plbend::testing;

TEST_CASE("transfer profile values and symmetry") {
    const auto profile = pst_profile(9, 0.1);
    REQUIRE(profile.size() == 8);

    // (pi/2L) sqrt((N-j) j) in 1/m for L = 10 cm.
    CHECK(per_cm_from_per_m(profile[0]) == doctest::Approx(0.4442882938).epsilon(1e-9));
    CHECK(per_cm_from_per_m(profile[3]) == doctest::Approx(0.7024814731).epsilon(1e-9));

    // Centrosymmetric about the middle link.
    for (std::size_t j = 0; j < profile.size(); ++j)
        CHECK(profile[j] == profile[profile.size() - 1 - j]);

    const auto two = pst_profile(2, 0.1);
    REQUIRE(two.size() == 1);
    CHECK(two[0] == doctest::Approx(0.5 * pi / 0.1));

    CHECK_THROWS_AS(pst_profile(1, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(pst_profile(9, -1.0), std::invalid_argument);
}

TEST_CASE("separation engineering round trip") {
    const auto spec = asymmetric_spec();
    const auto mode = solve_mode(spec, kWavelength);
    const double target = per_m_from_per_cm(0.7024814731);

    for (double link_angle : {0.0, 20.0 * pi / 32.0}) {
        const double r = solve_separation(target, link_angle, spec, mode);
        const double back = coupling_analytic(mode, spec, mode, spec,
                                              PairGeometry::folded(r, link_angle));
        CHECK(std::abs(back - target) <= 1e-8 * target);
    }

    // Anisotropy: the same target needs different separations on the
    // two arms of a bent chain.
    const double r0 = solve_separation(target, 0.0, spec, mode);
    const double r_bent = solve_separation(target, 20.0 * pi / 32.0, spec, mode);
    CHECK(std::abs(r0 - r_bent) > 1e-6);
}

TEST_CASE("unreachable separation targets") {
    const auto spec = asymmetric_spec();
    const auto mode = solve_mode(spec, kWavelength);
    // Far above the coupling at the floor separation.
    CHECK_THROWS_AS(solve_separation(per_m_from_per_cm(1e3), 0.0, spec, mode),
                    UnreachableTargetError);
    // Far below the coupling at the ceiling separation.
    CHECK_THROWS_AS(solve_separation(per_m_from_per_cm(1e-20), 0.0, spec, mode),
                    UnreachableTargetError);
}

TEST_CASE("unbent layout geometry") {
    const auto layout = build_layout(kCount, kCorner, 0.0, kDeviceLength,
                                     asymmetric_spec(), kWavelength);
    CHECK(layout.count == kCount);
    CHECK(layout.corner == kCorner);
    REQUIRE(layout.positions.size() == 9);
    REQUIRE(layout.link_separations.size() == 8);

    // Collinear along x, mirror-symmetric separations.
    for (const auto& p : layout.positions) CHECK(p[1] == 0.0);
    for (int j = 0; j < 8; ++j)
        CHECK(layout.link_separations[j] ==
              layout.link_separations[7 - j]);

    // Consecutive distances equal the engineered separations.
    for (int j = 0; j + 1 < 9; ++j) {
        const double dx = layout.positions[j + 1][0] - layout.positions[j][0];
        const double dy = layout.positions[j + 1][1] - layout.positions[j][1];
        CHECK(std::hypot(dx, dy) ==
              doctest::Approx(layout.link_separations[j]).epsilon(1e-12));
    }
}

TEST_CASE("bent layout sits on two rays through the corner") {
    const double bend = 19.0 * pi / 32.0;
    const auto layout = build_layout(kCount, kCorner, bend, kDeviceLength,
                                     asymmetric_spec(), kWavelength);
    // Corner at the origin.
    CHECK(layout.positions[kCorner][0] == 0.0);
    CHECK(layout.positions[kCorner][1] == 0.0);
    // First arm along (-1, 0).
    for (int j = 0; j < kCorner; ++j) {
        CHECK(layout.positions[j][0] < 0.0);
        CHECK(layout.positions[j][1] == 0.0);
    }
    // Second arm along (cos theta, sin theta).
    const double ca = std::cos(bend), sa = std::sin(bend);
    for (int j = kCorner + 1; j < kCount; ++j) {
        const double cross = layout.positions[j][0] * sa - layout.positions[j][1] * ca;
        const double norm = std::hypot(layout.positions[j][0], layout.positions[j][1]);
        CHECK(std::abs(cross) <= 1e-9 * norm);
    }
}

TEST_CASE("sharper bends pull the corner neighbours together") {
    auto gap46 = [&](double bend) {
        const auto layout = build_layout(kCount, kCorner, bend, kDeviceLength,
                                         asymmetric_spec(), kWavelength);
        const double dx = layout.positions[5][0] - layout.positions[3][0];
        const double dy = layout.positions[5][1] - layout.positions[3][1];
        return std::hypot(dx, dy);
    };
    CHECK(gap46(20.0 * pi / 32.0) < gap46(16.0 * pi / 32.0));
}

TEST_CASE("engineered nearest-neighbour couplings hit the profile") {
    const auto targets = pst_profile(kCount, kDeviceLength);
    for (double bend : {0.0, 16.0 * pi / 32.0}) {
        const auto layout = build_layout(kCount, kCorner, bend, kDeviceLength,
                                         asymmetric_spec(), kWavelength);
        const auto h = coupling_matrix(layout, kWavelength);
        for (int j = 0; j + 1 < kCount; ++j) {
            CAPTURE(bend);
            CAPTURE(j);
            CHECK(std::abs(h.matrix(j, j + 1) - targets[j]) <= 1e-6 * targets[j]);
        }
    }
}

TEST_CASE("coupling matrix structure") {
    const auto layout = build_layout(kCount, kCorner, 0.0, kDeviceLength,
                                     asymmetric_spec(), kWavelength);
    const auto h = coupling_matrix(layout, kWavelength);

    // Symmetric with zero diagonal (identical sites, common beta).
    CHECK((h.matrix - h.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int j = 0; j < kCount; ++j) CHECK(h.matrix(j, j) == 0.0);
    // All couplings positive.
    for (int i = 0; i < kCount; ++i)
        for (int j = i + 1; j < kCount; ++j) CHECK(h.matrix(i, j) > 0.0);

    // Unbent chain: beyond-nearest-neighbour couplings are at least an
    // order of magnitude down on the largest nearest-neighbour one.
    double nn_max = 0.0, far_max = 0.0;
    for (int i = 0; i < kCount; ++i)
        for (int j = i + 1; j < kCount; ++j) {
            if (j == i + 1)
                nn_max = std::max(nn_max, h.matrix(i, j));
            else
                far_max = std::max(far_max, h.matrix(i, j));
        }
    CHECK(far_max < 0.1 * nn_max);
}

TEST_CASE("critical-angle structure of the coupling matrix") {
    auto far_to_nn = [&](const WaveguideSpec& spec, double bend) {
        const auto layout = build_layout(kCount, kCorner, bend, kDeviceLength, spec,
                                         kWavelength);
        const auto h = coupling_matrix(layout, kWavelength);
        double nn_min = 1e300, far_max = 0.0;
        for (int i = 0; i < kCount; ++i)
            for (int j = i + 1; j < kCount; ++j) {
                if (j == i + 1)
                    nn_min = std::min(nn_min, h.matrix(i, j));
                else
                    far_max = std::max(far_max, h.matrix(i, j));
            }
        return far_max / nn_min;
    };

    // Gentle bends leave the chain effectively tridiagonal; beyond the
    // critical angle the corner skip coupling becomes comparable.
    CHECK(far_to_nn(asymmetric_spec(), 8.0 * pi / 32.0) < 0.15);
    CHECK(far_to_nn(asymmetric_spec(), 16.0 * pi / 32.0) < 0.15);
    CHECK(far_to_nn(asymmetric_spec(), 19.0 * pi / 32.0) > 0.3);
    CHECK(far_to_nn(asymmetric_spec(), 20.0 * pi / 32.0) > 0.3);

    // Square waveguides: the corner skip stays at least 5x below the
    // corner links even at the sharpest bend studied.
    const auto layout = build_layout(kCount, kCorner, 20.0 * pi / 32.0,
                                     kDeviceLength, symmetric_spec(), kWavelength);
    const auto h = coupling_matrix(layout, kWavelength);
    const double skip = h.matrix(kCorner - 1, kCorner + 1);
    CHECK(skip <= h.matrix(kCorner - 1, kCorner) / 5.0);
    CHECK(skip <= h.matrix(kCorner, kCorner + 1) / 5.0);
}

TEST_CASE("relative coupling map") {
    const auto layout = build_layout(kCount, kCorner, 0.0, kDeviceLength,
                                     asymmetric_spec(), kWavelength);
    const auto h = coupling_matrix(layout, kWavelength);
    const auto map = relative_coupling_map(h);

    CHECK(map.maxCoeff() == 1.0);
    CHECK((map - map.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int j = 0; j < kCount; ++j) CHECK(map(j, j) == 0.0);

    // The nearest-neighbour band reproduces the normalized profile.
    const auto targets = pst_profile(kCount, kDeviceLength);
    const double gmax = *std::max_element(targets.begin(), targets.end());
    for (int j = 0; j + 1 < kCount; ++j)
        CHECK(map(j, j + 1) == doctest::Approx(targets[j] / gmax).epsilon(1e-6));

    LatticeHamiltonian zero;
    zero.matrix = Eigen::MatrixXd::Zero(4, 4);
    CHECK_THROWS_AS(relative_coupling_map(zero), AllZeroMatrixError);
}

TEST_CASE("layout input validation") {
    CHECK_THROWS_AS(build_layout(2, 1, 0.0, kDeviceLength, asymmetric_spec(), kWavelength),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_layout(9, 0, 0.0, kDeviceLength, asymmetric_spec(), kWavelength),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_layout(9, 8, 0.0, kDeviceLength, asymmetric_spec(), kWavelength),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_layout(9, 4, -0.1, kDeviceLength, asymmetric_spec(), kWavelength),
                    std::invalid_argument);
}
