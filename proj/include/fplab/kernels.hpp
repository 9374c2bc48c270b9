#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>

namespace fplab {

// Diffusion jump kernel in d = 1. Immutable; copies share state.
//  SmoothSymmetric      k(x) = profile(|x|), integrable, finite third moment
//  TruncatedFractional  |x|^{-1-a} on [eps, 1/eps], eps^{-1-a} below eps, 0 beyond 1/eps
//  Singular             c |x|^{-1-a} (the fractional Laplacian kernel; not integrable)
class Kernel {
public:
    enum class Family { SmoothSymmetric, TruncatedFractional, Singular };
    using Profile = std::function<double(double)>;

    // `sigma` is the kernel's standard deviation (sets the quadrature cut at
    // 40 sigma); (kappa0, rho) record the positivity condition k >= kappa0 on B(0, rho).
    static Kernel smooth(std::string name, Profile profile, double sigma, double kappa0, double rho);
    static Kernel truncated_fractional(double alpha, double eps);
    static Kernel singular(double alpha, double c);

    Family family() const;
    const std::string& name() const;
    double operator()(double x) const;

    double l1_norm() const;         // +inf for Singular
    double support_radius() const;  // +inf unless truncated
    double sigma() const;           // smooth only
    double alpha() const;           // fractional families
    double eps() const;             // truncated only; 1 for smooth unless rescaled
    double constant() const;        // singular prefactor c
    double kappa0() const;
    double rho() const;
    double quadrature_cut() const;  // upper limit used for integrals of smooth kernels

    // int k(x) cos(x xi) dx (not defined for Singular)
    double khat(double xi) const;
    // int k(x) (1 - cos(x xi)) dx = ||k||_1 - khat(xi), evaluated without cancellation.
    // For Singular this is kappa |xi|^alpha.
    double symbol(double xi) const;
    // int_0^delta z^2 k(z) dz
    double near_moment(double delta) const;

    Kernel rescaled(double eps) const;

private:
    struct Impl;
    explicit Kernel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

Kernel gaussian_reference_kernel();
Kernel rescale(const Kernel& k, double eps);
Kernel truncated_fractional_kernel(double alpha, double eps);
double khat(const Kernel& k, double xi);

struct MomentReport {
    double zeroth = 0, first = 0, second = 0, third_abs = 0;
    double defect0 = 0, defect1 = 0, defect2 = 0;  // vs targets 1, 0, 2
    double tail_cut = 0;
};
// tail_cut <= 0 selects 40 standard deviations
MomentReport verify_moments(const Kernel& k, double tail_cut = -1.0);

struct FourierRatio {
    double K_star = 0;        // max xi^2 khat^2 / (1 - khat) over the grid
    double xi_at_max = 0;
    double min_coercivity = 0;  // min (1 - khat) / min(1, xi^2) over the grid
    double xi_max = 0;
    int n_xi = 0;
};
// Grid of n_xi points on [-xi_max, xi_max]. Fails when 1 - khat(xi) falls below
// coercivity_floor * min(1, xi^2) at a grid point xi != 0.
FourierRatio fourier_ratio_constant(const Kernel& k, double xi_max = 8.0, int n_xi = 4097,
                                    double coercivity_floor = 1e-3);

// c_alpha = 2 - alpha, the normalization (c/2) int_{|z|<=1} z^2 |z|^{-1-alpha} dz = 1
double c_alpha(double alpha);
// kappa in: c int (f(x+z) - f(x)) |z|^{-1-alpha} dz  has symbol  -kappa |xi|^alpha
double fractional_symbol_constant(double alpha, double c);

} // namespace fplab
