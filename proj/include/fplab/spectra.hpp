#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fplab/norms.hpp"
#include "fplab/operators.hpp"
#include "fplab/semigroup.hpp"

namespace fplab {

struct SpectrumReport {
    std::vector<std::complex<double>> eigenvalues;  // all, descending real part
    std::vector<std::complex<double>> leading;      // first k_leading
    std::complex<double> zero;                      // the minimal-modulus eigenvalue
    double zero_residual = 0;                       // |zero|
    double gap = 0;                                 // sup Re over the rest

    // eigenvalues with Re > a
    int separation(double a) const;
};

SpectrumReport eigen_spectrum(const Eigen::MatrixXd& M, int k_leading = 8);
SpectrumReport eigen_spectrum(const OperatorMatrix& op, int k_leading = 8);

// Generator in Fourier variables, ghat -> -kappa |xi|^alpha ghat - xi ghat',
// on a symmetric xi-grid: uniform spacing dxi0 near 0, geometric (ratio) beyond,
// first-order upwinding outward along the characteristics xi e^t.
struct FourierSideGrid {
    double dxi0 = 1e-4;
    double ratio = 1.02;
    double xi_max = 40.0;
};
// dxi0 chosen so that kappa dxi0^alpha <= bias
FourierSideGrid default_fourier_side_grid(double alpha, double c, double bias = 5e-3);

struct FourierSideOperator {
    Eigen::VectorXd xi;
    Eigen::MatrixXd entries;
    double alpha = 0, c = 0, kappa = 0;
    int size() const { return static_cast<int>(xi.size()); }
};
FourierSideOperator assemble_fourier_side(double alpha, double c, const FourierSideGrid& grid);
FourierSideOperator assemble_fourier_side(double alpha, double c);

// decay of a zero-mass datum (ghat(0) = 0) in the discrete L2(dxi) norm, ExactExpm
DecayReport fourier_side_decay(const FourierSideOperator& op, const std::function<double(double)>& ghat0,
                               double t_end, double dt, const DecayOptions& opt = {});

struct GapRow {
    double param = 0;
    double gap = 0;
    double continuity = 0;  // |gap - reference|, when a reference is given
    std::string error;
};
struct GapSweepReport {
    std::vector<GapRow> rows;
    double max_gap = 0;
    double gap_target = 0;
    bool pass = false;
};
GapSweepReport gap_sweep(const std::vector<double>& params, const std::function<Eigen::MatrixXd(double)>& assemble_fn,
                         double gap_target, double reference_gap = std::numeric_limits<double>::quiet_NaN());

struct ProjectorReport {
    int rank = 0;
    double trace = 0;
    double idempotency_defect = 0;   // max over probes ||(P^2 - P) f|| / ||f||
    double contour_radius = 0;
    double min_eigen_distance = 0;   // min | |lambda| - r |
    double distance_to_reference = std::numeric_limits<double>::quiet_NaN();
    Eigen::MatrixXd matrix;
};
ProjectorReport spectral_projector(const OperatorMatrix& op, double radius, int n_contour = 64, int probes = 16,
                                   std::uint64_t seed = 7);
// probe-based ||P1 - P2|| in the given weighted space
double projector_distance(const ProjectorReport& p1, const ProjectorReport& p2, const Grid1D& grid,
                          const WeightSpec& w, int probes, std::uint64_t seed);

struct CertificateRow {
    std::complex<double> z;
    double norm = 0;
};
struct PerturbationReport {
    std::vector<CertificateRow> rows;
    double max_norm = 0;
    bool pass = false;
};
// K(z) = -(L_eps - L_0) R_{L_0}(z) A R_{B_eps}(z), R_X(z) = (X - z)^{-1};
// probe-based norm in the weighted L^1 space `w`.
PerturbationReport perturbation_certificate(const ModelSpec& model_eps, const ModelSpec& model_0, const Grid1D& grid,
                                            const SplittingSpec& split, const std::vector<std::complex<double>>& z_samples,
                                            const WeightSpec& w = {1, 0.5, 0}, int probes = 32, std::uint64_t seed = 11);

} // namespace fplab
