#ifndef PLBEND_TEST_HELPERS_HPP
#define PLBEND_TEST_HELPERS_HPP

#include "plbend/experiment.hpp"

namespace plbend::testing {

// Reference device: N = 9 chain of 6 x 2 um waveguides written in
// fused silica, operated at 800 nm with L = 10 cm.
inline WaveguideSpec asymmetric_spec() {
    return WaveguideSpec::rectangular_um(6.0, 2.0, 1.444, 1e-3);
}

inline WaveguideSpec symmetric_spec() {
    return WaveguideSpec::rectangular_um(6.0, 6.0, 1.444, 1e-3);
}

inline constexpr double kWavelength = 800e-9;
inline constexpr double kDeviceLength = 0.1;  // m
inline constexpr int kCount = 9;
inline constexpr int kCorner = 4;  // 0-based

} // namespace plbend::testing

#endif
