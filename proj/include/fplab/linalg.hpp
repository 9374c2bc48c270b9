#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace fplab {

// Pade scaling-and-squaring matrix exponential.
Eigen::MatrixXd expm(const Eigen::MatrixXd& A);

// All eigenvalues of a dense real matrix, sorted by descending real part
// (ties by descending imaginary part). Throws NumericalError on non-convergence.
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& A);

} // namespace fplab
