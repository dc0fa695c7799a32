#include "plbend/spectrum.hpp"

#include <cmath>

namespace plbend {

namespace {

double rms_about_mean(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size()));
}

} // namespace

SpectrumReport spectrum_spacings(const Eigen::MatrixXd& hamiltonian) {
    const double scale = 1.0 + hamiltonian.cwiseAbs().maxCoeff();
    if ((hamiltonian - hamiltonian.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw NonHermitianError("spectrum requires a Hermitian (real symmetric) matrix");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hamiltonian,
                                                       Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& lambda = eig.eigenvalues();  // ascending

    SpectrumReport report;
    report.eigenvalues.assign(lambda.data(), lambda.data() + lambda.size());
    report.spacings.resize(report.eigenvalues.size() > 1 ? report.eigenvalues.size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < report.eigenvalues.size(); ++i)
        report.spacings[i] = report.eigenvalues[i + 1] - report.eigenvalues[i];

    report.rms_deviation = rms_about_mean(report.spacings);
    if (report.spacings.size() > 2) {
        std::vector<double> interior(report.spacings.begin() + 1, report.spacings.end() - 1);
        report.trimmed_rms_deviation = rms_about_mean(interior);
    }
    return report;
}

} // namespace plbend
