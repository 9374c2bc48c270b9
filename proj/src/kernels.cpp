#include "fplab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fplab/error.hpp"
#include "fplab/quadrature.hpp"

namespace fplab {

struct Kernel::Impl {
    Family family = Family::SmoothSymmetric;
    std::string name;
    Profile profile;
    double sigma = 0, kappa0 = 0, rho = 0;
    double alpha = 0, eps = 1, c = 1;
    double l1 = 0;

    double cut() const { return 40.0 * sigma; }
    int panels(double xi) const {
        return std::max(200, static_cast<int>(std::ceil(cut() * std::abs(xi) / 2.0)));
    }
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("alpha must lie in (0, 2), got " + std::to_string(alpha));
}

// 1 - sin(u)/u, accurate for small u
double one_minus_sinc(double u) {
    if (std::abs(u) < 1e-2) {
        const double u2 = u * u;
        return u2 / 6.0 - u2 * u2 / 120.0 + u2 * u2 * u2 / 5040.0;
    }
    return 1.0 - std::sin(u) / u;
}

} // namespace

Kernel Kernel::smooth(std::string name, Profile profile, double sigma, double kappa0, double rho) {
    if (!profile) throw std::invalid_argument("kernel profile is empty");
    if (!(sigma > 0.0)) throw std::invalid_argument("kernel standard deviation must be positive");
    if (!(kappa0 > 0.0) || !(rho > 0.0))
        throw std::invalid_argument("positivity condition needs kappa0 > 0 and rho > 0");
    auto impl = std::make_shared<Impl>();
    impl->family = Family::SmoothSymmetric;
    impl->name = std::move(name);
    impl->profile = std::move(profile);
    impl->sigma = sigma;
    impl->kappa0 = kappa0;
    impl->rho = rho;
    const Profile& p = impl->profile;
    impl->l1 = 2.0 * integrate([&](double x) { return p(x); }, 0.0, impl->cut(), 400);
    return Kernel(std::move(impl));
}

Kernel Kernel::truncated_fractional(double alpha, double eps) {
    check_alpha(alpha);
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1), got " + std::to_string(eps));
    auto impl = std::make_shared<Impl>();
    impl->family = Family::TruncatedFractional;
    impl->name = "truncated-fractional";
    impl->alpha = alpha;
    impl->eps = eps;
    impl->kappa0 = std::pow(eps, -1.0 - alpha);
    impl->rho = eps;
    impl->l1 = 2.0 * (std::pow(eps, -alpha) + (std::pow(eps, -alpha) - std::pow(eps, alpha)) / alpha);
    return Kernel(std::move(impl));
}

Kernel Kernel::singular(double alpha, double c) {
    check_alpha(alpha);
    if (!(c > 0.0)) throw std::invalid_argument("fractional prefactor c must be positive");
    auto impl = std::make_shared<Impl>();
    impl->family = Family::Singular;
    impl->name = "fractional";
    impl->alpha = alpha;
    impl->c = c;
    impl->l1 = kInf;
    impl->eps = 0.0;
    return Kernel(std::move(impl));
}

Kernel::Family Kernel::family() const { return impl_->family; }
const std::string& Kernel::name() const { return impl_->name; }

double Kernel::operator()(double x) const {
    const double a = std::abs(x);
    const Impl& k = *impl_;
    switch (k.family) {
    case Family::SmoothSymmetric: return k.profile(a);
    case Family::TruncatedFractional:
        if (a < k.eps) return std::pow(k.eps, -1.0 - k.alpha);
        if (a <= 1.0 / k.eps) return std::pow(a, -1.0 - k.alpha);
        return 0.0;
    case Family::Singular: return a == 0.0 ? kInf : k.c * std::pow(a, -1.0 - k.alpha);
    }
    return 0.0;
}

double Kernel::l1_norm() const { return impl_->l1; }

double Kernel::support_radius() const {
    return impl_->family == Family::TruncatedFractional ? 1.0 / impl_->eps : kInf;
}

double Kernel::sigma() const {
    if (impl_->family != Family::SmoothSymmetric) throw std::invalid_argument("sigma: smooth kernels only");
    return impl_->sigma;
}
double Kernel::alpha() const {
    if (impl_->family == Family::SmoothSymmetric) throw std::invalid_argument("alpha: fractional kernels only");
    return impl_->alpha;
}
double Kernel::eps() const { return impl_->eps; }
double Kernel::constant() const { return impl_->c; }
double Kernel::kappa0() const { return impl_->kappa0; }
double Kernel::rho() const { return impl_->rho; }
double Kernel::quadrature_cut() const {
    return impl_->family == Family::SmoothSymmetric ? impl_->cut() : support_radius();
}

double Kernel::symbol(double xi) const {
    const Impl& k = *impl_;
    xi = std::abs(xi);
    if (xi == 0.0) return 0.0;
    switch (k.family) {
    case Family::SmoothSymmetric: {
        auto f = [&](double x) {
            const double s = std::sin(0.5 * xi * x);
            return k.profile(x) * 2.0 * s * s;
        };
        return 2.0 * integrate(f, 0.0, k.cut(), k.panels(xi));
    }
    case Family::TruncatedFractional: {
        const double e = k.eps, a = k.alpha;
        const double plateau = 2.0 * std::pow(e, -1.0 - a) * e * one_minus_sinc(xi * e);
        auto f = [&](double x) {
            const double s = std::sin(0.5 * xi * x);
            return std::pow(x, -1.0 - a) * 2.0 * s * s;
        };
        const double power = 2.0 * integrate_graded(f, e, 1.0 / e, 1.25, 1.0 / xi);
        return plateau + power;
    }
    case Family::Singular: return fractional_symbol_constant(k.alpha, k.c) * std::pow(xi, k.alpha);
    }
    return 0.0;
}

double Kernel::khat(double xi) const {
    const Impl& k = *impl_;
    switch (k.family) {
    case Family::SmoothSymmetric: {
        auto f = [&](double x) { return k.profile(x) * std::cos(xi * x); };
        return 2.0 * integrate(f, 0.0, k.cut(), k.panels(xi));
    }
    case Family::TruncatedFractional: return k.l1 - symbol(xi);
    case Family::Singular: throw std::invalid_argument("khat: the singular fractional kernel is not integrable");
    }
    return 0.0;
}

double Kernel::near_moment(double delta) const {
    if (!(delta >= 0.0)) throw std::invalid_argument("near_moment: delta must be >= 0");
    const Impl& k = *impl_;
    switch (k.family) {
    case Family::SmoothSymmetric: {
        const double b = std::min(delta, k.cut());
        return integrate([&](double z) { return z * z * k.profile(z); }, 0.0, b, 64);
    }
    case Family::TruncatedFractional: {
        const double e = k.eps, a = k.alpha;
        if (delta <= e) return std::pow(e, -1.0 - a) * delta * delta * delta / 3.0;
        const double m = std::min(delta, 1.0 / e);
        return std::pow(e, 2.0 - a) / 3.0 + (std::pow(m, 2.0 - a) - std::pow(e, 2.0 - a)) / (2.0 - a);
    }
    case Family::Singular: return k.c * std::pow(delta, 2.0 - k.alpha) / (2.0 - k.alpha);
    }
    return 0.0;
}

Kernel Kernel::rescaled(double eps) const {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("rescale: eps must be positive");
    if (impl_->family != Family::SmoothSymmetric) throw std::invalid_argument("rescale: smooth kernels only");
    if (eps == 1.0) return *this;
    auto impl = std::make_shared<Impl>(*impl_);
    Profile base = impl_->profile;
    impl->profile = [base, eps](double x) { return base(x / eps) / eps; };
    impl->sigma = impl_->sigma * eps;
    impl->kappa0 = impl_->kappa0 / eps;
    impl->rho = impl_->rho * eps;
    impl->eps = impl_->eps * eps;
    impl->name = impl_->name + "@eps=" + std::to_string(eps);
    // ||k_eps||_1 = ||k||_1 exactly; keep the parent's value rather than re-integrating
    return Kernel(std::move(impl));
}

Kernel gaussian_reference_kernel() {
    const double c = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    auto profile = [c](double x) { return c * std::exp(-0.25 * x * x); };
    return Kernel::smooth("gaussian", profile, std::sqrt(2.0), profile(1.0), 1.0);
}

Kernel rescale(const Kernel& k, double eps) { return k.rescaled(eps); }

Kernel truncated_fractional_kernel(double alpha, double eps) { return Kernel::truncated_fractional(alpha, eps); }

double khat(const Kernel& k, double xi) { return k.khat(xi); }

MomentReport verify_moments(const Kernel& k, double tail_cut) {
    if (k.family() != Kernel::Family::SmoothSymmetric)
        throw std::invalid_argument("moment normalization not applicable to " + k.name() + " kernels");
    const double cut = tail_cut > 0.0 ? tail_cut : 40.0 * k.sigma();
    const int panels = 400;
    MomentReport r;
    r.tail_cut = cut;
    r.zeroth = 2.0 * integrate([&](double x) { return k(x); }, 0.0, cut, panels);
    r.first = integrate([&](double x) { return x * k(x); }, -cut, cut, 2 * panels);
    r.second = 2.0 * integrate([&](double x) { return x * x * k(x); }, 0.0, cut, panels);
    r.third_abs = 2.0 * integrate([&](double x) { return x * x * x * k(x); }, 0.0, cut, panels);
    r.defect0 = std::abs(r.zeroth - 1.0);
    r.defect1 = std::abs(r.first);
    r.defect2 = std::abs(r.second - 2.0);
    if (!std::isfinite(r.zeroth) || !std::isfinite(r.second) || !std::isfinite(r.third_abs))
        throw NumericalError("kernel moments are not finite");
    return r;
}

FourierRatio fourier_ratio_constant(const Kernel& k, double xi_max, int n_xi, double coercivity_floor) {
    if (k.family() != Kernel::Family::SmoothSymmetric)
        throw std::invalid_argument("fourier_ratio_constant: smooth kernels only");
    if (!(xi_max > 0.0) || n_xi < 3) throw std::invalid_argument("fourier_ratio_constant: bad frequency grid");
    FourierRatio r;
    r.xi_max = xi_max;
    r.n_xi = n_xi;
    r.min_coercivity = kInf;
    const double l1 = k.l1_norm();
    const double dxi = 2.0 * xi_max / (n_xi - 1);
    // khat is even; scan xi >= 0 only
    for (int j = 0; j < n_xi; ++j) {
        const double xi = -xi_max + j * dxi;
        if (xi < 0.0 || std::abs(xi) < 0.5 * dxi) continue;
        const double gap = k.symbol(xi);  // 1 - khat
        const double kh = l1 - gap;
        const double coercivity = gap / std::min(1.0, xi * xi);
        r.min_coercivity = std::min(r.min_coercivity, coercivity);
        if (!(coercivity > coercivity_floor))
            throw NumericalError("1 - khat(xi) = " + std::to_string(gap) + " at xi = " + std::to_string(xi) +
                                 ": kernel violates the coercivity condition 1 - khat >= eta > 0");
        const double ratio = xi * xi * kh * kh / gap;
        if (ratio > r.K_star) {
            r.K_star = ratio;
            r.xi_at_max = xi;
        }
    }
    return r;
}

double c_alpha(double alpha) {
    check_alpha(alpha);
    return 2.0 - alpha;
}

double fractional_symbol_constant(double alpha, double c) {
    check_alpha(alpha);
    return c * std::numbers::pi / (std::tgamma(1.0 + alpha) * std::sin(0.5 * std::numbers::pi * alpha));
}

} // namespace fplab
