#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fplab/grid.hpp"
#include "fplab/kernels.hpp"
#include "fplab/norms.hpp"
#include "fplab/probes.hpp"

namespace fplab {

// d/dt f = D f + (x f)'
struct Classical {};                      // D = Laplacian
struct DiscreteClassical {                // D = eps^-2 (k_eps * f - ||k||_1 f)
    double eps;
    Kernel kernel = gaussian_reference_kernel();
};
struct Fractional {                       // D = c int (f(y) - f(x)) |x-y|^{-1-alpha} dy
    double alpha;
    double c;                             // c_alpha(alpha) unless stated otherwise
};
struct DiscreteFractional {               // D = k_eps * f - ||k_eps||_1 f, truncated kernel
    double eps;
    double alpha;
};
using ModelSpec = std::variant<Classical, DiscreteClassical, Fractional, DiscreteFractional>;

ModelSpec classical();
ModelSpec discrete_classical(double eps, const Kernel& k = gaussian_reference_kernel());
ModelSpec fractional(double alpha);                    // c = c_alpha
ModelSpec fractional(double alpha, double c);
ModelSpec discrete_fractional(double eps, double alpha);
// the eps -> 0 limit of DiscreteFractional: unit prefactor
inline ModelSpec fractional_limit(double alpha) { return fractional(alpha, 1.0); }

// "classical", "discrete-classical:EPS", "fractional:ALPHA[,C]", "discrete-fractional:EPS,ALPHA"
ModelSpec parse_model(const std::string& text);
void validate(const ModelSpec& m);
std::string describe(const ModelSpec& m);
// jump kernel of the model (Singular for Fractional); throws for Classical
Kernel jump_kernel(const ModelSpec& m);

enum class OperatorRole { Full, PartA, PartB };
std::string to_string(OperatorRole r);

struct OperatorMatrix {
    Grid1D grid;
    Eigen::MatrixXd entries;               // (d/dt f)_i = sum_j entries(i, j) f_j
    OperatorRole role = OperatorRole::Full;
    std::string label;
    double conservation_defect = 0.0;      // max_j |sum_i omega_i M_ij|, omega = trapezoid weights
    // Jump mass that the full-line rule would send outside [-L, L], which the
    // censored diagonal keeps; relative to the column's total jump rate.
    double renormalization_interior = 0.0; // max over |x_j| <= L/2
    double renormalization_max = 0.0;      // max over all columns

    int size() const { return grid.size(); }
};

OperatorMatrix assemble(const ModelSpec& model, const Grid1D& grid);

// Splittings Lambda = A + B.
//   ClassicalSplit:  A = M chi_R (k_eps * .) (A = M chi_R for the local and fractional models)
//   FractionalSplit: A f(x) = int k(x-y) chi_{eta,L}(x-y) xi_R(x,y) f(y) dy
struct ClassicalSplit {
    double M;
    double R;
};
struct FractionalSplit {
    double eta;
    double Lcut;
    double R;
};
using SplittingSpec = std::variant<ClassicalSplit, FractionalSplit>;
std::string describe(const SplittingSpec& s);

std::pair<OperatorMatrix, OperatorMatrix> assemble_splitting(const ModelSpec& model, const Grid1D& grid,
                                                             const SplittingSpec& split);

// C^2 cutoff: 1 on |x| <= 1, S(2 - |x|) on 1 < |x| < 2, 0 beyond; S(u) = u^3 (10 - 15u + 6u^2)
double cutoff(double x);
inline double cutoff(double x, double R) { return cutoff(x / R); }

Field apply(const OperatorMatrix& m, const Field& f);

// max over seeded probes of ||(M1 - M2) f||_target / ||f||_source
// (a lower-bound proxy of the operator norm)
double operator_distance(const OperatorMatrix& m1, const OperatorMatrix& m2, const WeightSpec& source,
                         const WeightSpec& target, int probes, std::uint64_t seed, const ProbeOptions& opt = {});
double operator_distance(const Eigen::MatrixXd& diff, const Grid1D& grid, const WeightSpec& source,
                         const WeightSpec& target, int probes, std::uint64_t seed, const ProbeOptions& opt = {});

// Off-diagonal jump rates by grid offset for the Taylor-corrected rule used
// for fractional kernels: rate[1] carries int_0^{2h} z^2 k / h^2, rate[2] is
// the half-weight trapezoid node, rate[j] = h k(jh) beyond. `tail` is the
// one-sided rate the same rule assigns to offsets past the grid.
struct JumpStencil {
    std::vector<double> rate;
    double tail = 0.0;
};
JumpStencil jump_stencil(const Kernel& k, const Grid1D& grid);

// Debug dumps: CSV rows, or binary with a one-line text header.
void dump_matrix(std::ostream& os, const OperatorMatrix& m, bool binary);

} // namespace fplab
