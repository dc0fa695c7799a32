#ifndef PLBEND_SPECTRUM_HPP
#define PLBEND_SPECTRUM_HPP

#include <Eigen/Dense>
#include <vector>

#include "plbend/errors.hpp"

namespace plbend {

// Eigenvalue commensurability diagnostics.  A perfectly equidistant
// spectrum (the unbent engineered chain) has zero RMS deviation; bends
// distort it and the corner defect restores it.
struct SpectrumReport {
    std::vector<double> eigenvalues;  // ascending (1/m)
    std::vector<double> spacings;     // successive differences
    double rms_deviation = 0.0;       // RMS of spacings about their mean
    // Same metric with the two extremal spacings dropped; the border
    // eigenvectors contribute negligibly to the transfer dynamics.
    double trimmed_rms_deviation = 0.0;
};

SpectrumReport spectrum_spacings(const Eigen::MatrixXd& hamiltonian);

} // namespace plbend

#endif
