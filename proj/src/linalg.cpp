#include "fplab/linalg.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "fplab/error.hpp"

namespace fplab {

Eigen::MatrixXd expm(const Eigen::MatrixXd& A) {
    Eigen::MatrixXd E = A.exp();
    if (!E.allFinite()) throw NumericalError("matrix exponential produced non-finite entries");
    return E;
}

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
    if (!A.allFinite()) throw std::invalid_argument("eigenvalues: matrix has non-finite entries");
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver did not converge");
    std::vector<std::complex<double>> ev(es.eigenvalues().begin(), es.eigenvalues().end());
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return ev;
}

} // namespace fplab
