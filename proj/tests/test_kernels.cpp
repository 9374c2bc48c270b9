#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fplab/error.hpp"
#include "fplab/kernels.hpp"

using namespace fplab;
using std::numbers::pi;

namespace {
template <class F>
double gk(F f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}
}  // namespace

TEST_CASE("gaussian reference kernel") {
    auto k = gaussian_reference_kernel();
    CHECK(k.family() == Kernel::Family::SmoothSymmetric);
    CHECK(k(0.0) == doctest::Approx(1.0 / std::sqrt(4 * pi)).epsilon(1e-15));
    CHECK(k(0.0) == doctest::Approx(0.2820948).epsilon(1e-7));
    CHECK(std::abs(k.l1_norm() - 1.0) <= 1e-10);
    CHECK(std::abs(khat(k, 0.0) - k.l1_norm()) <= 1e-10);
    CHECK(std::abs(khat(k, 1.0) - std::exp(-1.0)) <= 1e-8);
    for (double xi : {0.1, 0.7, 2.0, 5.0}) CHECK(std::abs(k.khat(xi) - std::exp(-xi * xi)) <= 1e-12);

    // Taylor behaviour at the origin: (1 - khat)/xi^2 -> 1
    const double xi = 1e-3;
    CHECK(std::abs(k.symbol(xi) / (xi * xi) - 1.0) <= 1e-5);

    auto m = verify_moments(k);
    CHECK(m.defect0 <= 1e-10);
    CHECK(m.defect1 <= 1e-10);
    CHECK(m.defect2 <= 1e-10);
    CHECK(m.third_abs == doctest::Approx(8.0 / std::sqrt(pi)).epsilon(1e-10));  // E|X|^3 for N(0, 2)

    // positivity condition recorded with the instance
    for (double x = -k.rho(); x <= k.rho(); x += 0.01) CHECK(k(x) >= k.kappa0());
}

TEST_CASE("rescaling") {
    auto k = gaussian_reference_kernel();
    auto same = rescale(k, 1.0);
    for (double x : {0.0, 0.3, 2.0}) CHECK(same(x) == k(x));

    auto h = rescale(k, 0.5);
    auto m = verify_moments(h);
    CHECK(m.defect0 <= 1e-10);
    CHECK(std::abs(m.second - 0.5) <= 1e-10);

    auto q = rescale(k, 0.25);
    for (double xi : {0.5, 1.0, 4.0}) CHECK(std::abs(q.khat(xi) - std::exp(-xi * xi / 16)) <= 1e-10);

    for (double eps : {0.5, 0.25, 0.1})
        for (double xi = -12.0; xi <= 12.0; xi += 0.75) {
            auto ke = rescale(k, eps);
            CHECK(std::abs(ke.khat(xi) - k.khat(eps * xi)) <= 1e-9);
        }
    CHECK_THROWS_AS(rescale(truncated_fractional_kernel(1.0, 0.1), 0.5), std::invalid_argument);
}

TEST_CASE("truncated fractional kernel") {
    auto k = truncated_fractional_kernel(1.0, 0.1);
    CHECK(k(0.05) == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(k(0.5) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(k(10.5) == 0.0);
    CHECK(k.l1_norm() == doctest::Approx(39.8).epsilon(1e-14));
    CHECK(k.khat(0.0) == doctest::Approx(k.l1_norm()).epsilon(1e-12));

    // khat against adaptive quadrature of the closed-form profile
    for (double alpha : {0.6, 1.0, 1.5})
        for (double xi : {0.3, 1.0, 3.0}) {
            auto kk = truncated_fractional_kernel(alpha, 0.1);
            const double e = 0.1;
            const double oracle = 2 * (std::pow(e, -1 - alpha) * std::sin(xi * e) / xi +
                                       gk([&](double x) { return std::pow(x, -1 - alpha) * std::cos(xi * x); }, e, 1 / e));
            CHECK(kk.khat(xi) == doctest::Approx(oracle).epsilon(1e-9));
        }

    // monotone in eps: k_{e1} >= k_{e2} for e1 < e2
    for (double alpha : {0.5, 1.0, 1.7}) {
        auto a = truncated_fractional_kernel(alpha, 0.05);
        auto b = truncated_fractional_kernel(alpha, 0.2);
        for (double x = -25.0; x <= 25.0; x += 0.013)
            if (x != 0.0) CHECK(a(x) >= b(x));
    }

    try {
        verify_moments(k);
        FAIL("moments accepted for a fractional kernel");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("moment normalization not applicable") != std::string::npos);
    }
    CHECK_THROWS_AS(truncated_fractional_kernel(1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(truncated_fractional_kernel(2.0, 0.1), std::invalid_argument);
}

TEST_CASE("evaluators are even") {
    const Kernel ks[] = {gaussian_reference_kernel(), rescale(gaussian_reference_kernel(), 0.3),
                         truncated_fractional_kernel(0.7, 0.2), Kernel::singular(1.2, 0.8)};
    for (const auto& k : ks)
        for (double x = 0.0; x < 8.0; x += 0.0371) {
            CHECK(k(x) == k(-x));
            CHECK(k(x) >= 0.0);
        }
}

TEST_CASE("singular kernel symbol") {
    // int (1 - cos z) |z|^{-1-a} dz = 2 Gamma(1-a) cos(pi a/2) / a  (pi at a = 1)
    for (double a : {0.4, 0.9, 1.0, 1.5, 1.9}) {
        const double oracle = a == 1.0 ? pi : 2 * std::tgamma(1 - a) * std::cos(pi * a / 2) / a;
        CHECK(fractional_symbol_constant(a, 1.0) == doctest::Approx(oracle).epsilon(1e-12));
        auto k = Kernel::singular(a, 0.7);
        CHECK(k.symbol(2.0) == doctest::Approx(0.7 * oracle * std::pow(2.0, a)).epsilon(1e-12));
    }
    CHECK(std::isinf(Kernel::singular(1.0, 1.0).l1_norm()));
    CHECK_THROWS_AS(Kernel::singular(1.0, 1.0).khat(1.0), std::invalid_argument);
}

TEST_CASE("c_alpha normalization") {
    CHECK(c_alpha(1.0) == 1.0);
    CHECK(c_alpha(0.5) == 1.5);
    CHECK(c_alpha(1.999) > 0.0);
    CHECK(c_alpha(1.999) < 1e-2);
    for (double a : {0.3, 1.0, 1.6}) {
        boost::math::quadrature::tanh_sinh<double> ts;
        const double I = 0.5 * c_alpha(a) * 2 * ts.integrate([a](double z) { return std::pow(z, 1 - a); }, 0.0, 1.0);
        CHECK(I == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(c_alpha(2.0), std::invalid_argument);
}

TEST_CASE("near-field moments") {
    auto k = gaussian_reference_kernel();
    CHECK(k.near_moment(1.3) == doctest::Approx(gk([&](double z) { return z * z * k(z); }, 0.0, 1.3)).epsilon(1e-12));
    auto t = truncated_fractional_kernel(1.2, 0.1);
    CHECK(t.near_moment(2.0) == doctest::Approx(gk([&](double z) { return z * z * t(z); }, 0.0, 0.1) +
                                                gk([&](double z) { return z * z * t(z); }, 0.1, 2.0))
                                    .epsilon(1e-12));
}

TEST_CASE("fourier ratio constant") {
    auto k = gaussian_reference_kernel();
    auto r = fourier_ratio_constant(k, 8.0, 4097);
    CHECK(r.K_star <= 1.2);

    // independent scan of the closed form on the same grid
    double oracle = 0;
    const double dxi = 16.0 / 4096;
    for (int j = 0; j < 4097; ++j) {
        const double xi = -8.0 + j * dxi;
        if (xi <= 0.0) continue;
        oracle = std::max(oracle, xi * xi * std::exp(-2 * xi * xi) / -std::expm1(-xi * xi));
    }
    CHECK(r.K_star == doctest::Approx(oracle).epsilon(1e-9));
    // the ratio tends to 1 at the origin
    CHECK(std::abs(r.K_star - 1.0) <= 1e-4);

    // it is a max: xi^2 khat^2 <= K* (1 - khat) on the grid
    for (int j = 0; j < 4097; ++j) {
        const double xi = -8.0 + j * dxi;
        if (std::abs(xi) < 0.5 * dxi) continue;
        const double kh = k.khat(xi);
        CHECK(xi * xi * kh * kh <= r.K_star * k.symbol(xi) * (1 + 1e-12));
    }
}

TEST_CASE("fourier ratio rejects a kernel without coercivity") {
    // two narrow bumps at +-2: khat(xi) = cos(2 xi) e^{-s^2 xi^2/2}, nearly 1 at xi = pi
    const double s = 0.01, a = 2.0;
    auto profile = [=](double r) { return std::exp(-0.5 * (r - a) * (r - a) / (s * s)) / (2 * s * std::sqrt(2 * pi)); };
    auto k = Kernel::smooth("cosine", profile, 0.1, 1e-12, 0.1);
    CHECK(k.l1_norm() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(k.khat(pi) == doctest::Approx(std::exp(-0.5 * s * s * pi * pi)).epsilon(1e-8));
    CHECK_THROWS_AS(fourier_ratio_constant(k), NumericalError);
}
