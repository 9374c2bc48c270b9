#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fplab/grid.hpp"
#include "fplab/kernels.hpp"
#include "fplab/norms.hpp"
#include "fplab/operators.hpp"
#include "fplab/probes.hpp"

namespace fplab {

// I_eps(f) = 1/(2 eps^2) int int (f(x) - f(y))^2 k_eps(x - y)
struct DirichletForm {
    double double_sum = 0;  // O(n^2) lattice sum
    double fourier = 0;     // (1/2pi) int |fhat|^2 (1 - khat(eps xi)) / eps^2
    double relative_gap = 0;
};
DirichletForm dirichlet_form(const Field& f, const Kernel& k, double eps);

struct GradientCheck {
    double lhs = 0;  // ||d/dx (k_eps * f)||^2_{L2}
    double rhs = 0;  // K I_eps(f)
    bool pass = false;
};
GradientCheck gradient_convolution_check(const Field& f, const Kernel& k, double eps, double K);
// Many probes at once (shares the tabulated kernel symbol).
std::vector<GradientCheck> gradient_convolution_check(const std::vector<Field>& fs, const Kernel& k, double eps,
                                                      double K);

struct PsiProfile {
    Eigen::VectorXd x;
    Eigen::VectorXd values;  // psi(x) - M chi_R(x)
    double sup = 0;
    double argsup = 0;
    double eps = 0, M = 0, R = 0, q = 0, C = 0, C_R = 0;
    int p = 1;
    double eps0 = 0;  // largest eps with sup <= a (for the a given to psi_profile)
    double a = 0;
    bool pass = false;
};
// psi(x) = C <x>^{-2} + 1/p' - q x^2/<x>^2 + M C_R eps
PsiProfile psi_profile(const Grid1D& grid, double eps, double M, double R, int p, double q, double C_bound,
                       double C_R, double a);
// Concrete constants: C = max_x <x>^2 theta(x) with theta the Taylor remainder
// term of the convolution acting on m^p; C_R from the commutator of k_eps with chi_R^c m^p.
double psi_constant_C(const Grid1D& grid, const Kernel& k, double eps, double M, int p, double q);
double psi_constant_CR(const Grid1D& grid, const Kernel& k, double eps, double M, double R, int p, double q);

struct DissipativityReport {
    std::string label;
    std::string weight;
    int probes = 0;
    int skipped = 0;
    double worst_ratio = 0;
    double a = 0;
    bool pass = false;
};
// worst over probes of <B f, Phi'(f)>_{L^p(m)} / ||f||^p_{L^p(m)}; for p = 2, s = 1
// the H^1(m) inner product is used.
DissipativityReport dissipativity_check(const OperatorMatrix& B, const WeightSpec& w, double a, int probes,
                                        std::uint64_t seed, const ProbeOptions& opt = {});

struct AdjointReport {
    double worst_ratio = 0;  // max <B* phi, phi> / ||phi||^2, the numerical b_0
    double b = 0;
    bool pass = false;
    int probes = 0;
};
// B* = (D_m B D_m^{-1})^T, D_m = diag(<x>^q); requires q < alpha / 2
AdjointReport adjoint_dissipativity_check(const OperatorMatrix& B, double q, double alpha, double b, int probes,
                                          std::uint64_t seed);

struct RegularizationRow {
    double t = 0;
    double norm = 0;
};
struct RegularizationReport {
    int n_conv = 1;
    std::vector<RegularizationRow> rows;
    double rate = 0;       // least-squares slope of log(norm) over the rows with t >= fit_from
    double residual = 0;
    std::string source, target;
};
RegularizationReport regularization_norm(const OperatorMatrix& A, const OperatorMatrix& B, int n_conv,
                                         const std::vector<double>& t_grid, const WeightSpec& source,
                                         const WeightSpec& target, int probes = 32, std::uint64_t seed = 5,
                                         const ProbeOptions& opt = {}, double fit_from = 1.0);

// int int (u(x) - u(y))^2 |x-y|^{-1-alpha} vs c0 int |xi|^alpha |uhat|^2 dxi,
// c0 = 1 / (Gamma(1+alpha) sin(pi alpha/2))
struct SobolevIdentity {
    double double_sum = 0;
    double fourier = 0;
    double c0 = 0;
    double relative_gap = 0;
};
SobolevIdentity fractional_sobolev_identity(const Field& u, double alpha);
double fractional_sobolev_constant(double alpha);

} // namespace fplab
