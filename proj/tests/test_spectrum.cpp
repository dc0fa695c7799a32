#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"

using namespace plbend;
using namespace plbend::testing;

TEST_CASE("ideal chain has an exactly equidistant spectrum") {
    const auto rep = spectrum_spacings(pst_hamiltonian(9, 0.1));
    REQUIRE(rep.eigenvalues.size() == 9);
    REQUIRE(rep.spacings.size() == 8);

    const double expected = pi / 0.1;  // 1/m
    for (double s : rep.spacings)
        CHECK(std::abs(s - expected) <= 1e-10 * expected);
    CHECK(rep.rms_deviation <= 1e-10);
    CHECK(rep.trimmed_rms_deviation <= 1e-10);

    // Ascending eigenvalues, non-negative spacings.
    for (std::size_t i = 0; i + 1 < rep.eigenvalues.size(); ++i)
        CHECK(rep.eigenvalues[i] < rep.eigenvalues[i + 1]);
}

TEST_CASE("bends distort commensurability, the defect restores it") {
    auto rms_pair = [&](double bend) {
        const auto layout = build_layout(kCount, kCorner, bend, kDeviceLength,
                                         asymmetric_spec(), kWavelength);
        const auto h = coupling_matrix(layout, kWavelength);
        const auto res = optimize_detuning(layout, kWavelength);
        const auto bare = spectrum_spacings(h.matrix);
        const auto opt = spectrum_spacings(with_corner_detuning(h, res.detuning));
        return std::make_pair(bare.rms_deviation, opt.rms_deviation);
    };

    const auto [bare19, opt19] = rms_pair(19.0 * pi / 32.0);
    const auto [bare20, opt20] = rms_pair(20.0 * pi / 32.0);
    CHECK(bare19 > 0.0);
    CHECK(bare20 > bare19);   // sharper bend, larger distortion
    CHECK(opt19 < bare19);    // defect restores the spacing
    CHECK(opt20 < bare20);
}

TEST_CASE("bent chain spectrum is positive-deviation") {
    const auto layout = build_layout(kCount, kCorner, 20.0 * pi / 32.0, kDeviceLength,
                                     asymmetric_spec(), kWavelength);
    const auto h = coupling_matrix(layout, kWavelength);
    CHECK(spectrum_spacings(h.matrix).rms_deviation > 1e-10);
}

TEST_CASE("non-Hermitian input is rejected") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 2) = 2.0;
    CHECK_THROWS_AS(spectrum_spacings(m), NonHermitianError);
}
