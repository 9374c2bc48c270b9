#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Eigenvalues>

#include "fplab/fourier.hpp"
#include "fplab/grid.hpp"
#include "fplab/linalg.hpp"
#include "fplab/norms.hpp"
#include "fplab/probes.hpp"
#include "fplab/quadrature.hpp"

using namespace fplab;
using std::numbers::pi;

namespace {
Field g2(const Grid1D& g, double shift = 0.0) {
    return Field::sample(g, [shift](double x) { return std::exp(-0.5 * (x - shift) * (x - shift)) / std::sqrt(2 * pi); });
}
}  // namespace

TEST_CASE("grid construction") {
    auto g = make_grid(12.0, 1025);
    CHECK(g.spacing() == 0.0234375);
    CHECK(g.node(g.center()) == 0.0);
    for (int i = 0; i < g.size(); ++i) CHECK(g.node(i) == -g.node(g.size() - 1 - i));

    auto s = make_grid(1.0, 3);
    CHECK(s.node(0) == -1.0);
    CHECK(s.node(1) == 0.0);
    CHECK(s.node(2) == 1.0);

    try {
        make_grid(12.0, 1024);
        FAIL("even n accepted");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("n must be odd") != std::string::npos);
    }
    CHECK_THROWS_AS(make_grid(0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1.0, 1), std::invalid_argument);

    auto w = grid_with_spacing(10.0, 0.05);
    CHECK(w.spacing() == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(w.half_width() >= 10.0);
    CHECK(w.size() % 2 == 1);
}

TEST_CASE("trapezoid mass") {
    auto g = make_grid(12.0, 1025);
    CHECK(std::abs(mass(g2(g)) - 1.0) <= 1e-10);
    CHECK(mass(Field::zeros(g)) == 0.0);
    auto box = Field::sample(g, [](double x) { return std::abs(x) <= 1.0 ? 1.0 : 0.0; });
    CHECK(std::abs(mass(box) - 2.0) <= g.spacing());

    // exact on grid-aligned piecewise-linear data: hat of height 1, half width w, kinks on nodes
    const double c = g.node(g.center() + 10), w = 32 * g.spacing();
    auto hat = Field::sample(g, [&](double x) { return std::max(0.0, 1.0 - std::abs(x - c) / w); });
    CHECK(mass(hat) == doctest::Approx(w).epsilon(1e-14));
}

TEST_CASE("weighted norms") {
    auto g = make_grid(12.0, 1025);
    auto f = g2(g);
    CHECK(std::abs(weighted_norm(f, {1, 0.0, 0}) - 1.0) <= 1e-10);
    CHECK(weighted_norm(f, {2, 0.0, 0}) == doctest::Approx(std::sqrt(1.0 / (2 * std::sqrt(pi)))).epsilon(1e-10));

    // independent adaptive Gauss-Kronrod on the whole line
    auto integrand = [](double x) { return std::sqrt(1 + x * x) * std::exp(-0.5 * x * x) / std::sqrt(2 * pi); };
    const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 15, 1e-14);
    CHECK(weighted_norm(f, {1, 1.0, 0}) == doctest::Approx(oracle).epsilon(1e-10));

    // homogeneity for every (p, q, s)
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-3, 3);
    auto probes = make_probes(g, 6, 21);
    for (int p : {1, 2})
        for (double q : {0.0, 0.5, 2.0})
            for (int s : {0, 1, 2, 3}) {
                WeightSpec w{p, q, s};
                for (const auto& pr : probes) {
                    const double c = U(rng);
                    Field cf(g, c * pr.values());
                    CHECK(std::abs(weighted_norm(cf, w) - std::abs(c) * weighted_norm(pr, w)) <=
                          1e-12 * std::abs(c) * weighted_norm(pr, w));
                }
            }
}

TEST_CASE("weight spec parsing") {
    auto w = WeightSpec::parse("2,1.5,1");
    CHECK(w.p == 2);
    CHECK(w.q == 1.5);
    CHECK(w.s == 1);
    CHECK(WeightSpec::parse("1,0").s == 0);
    CHECK_THROWS_AS(WeightSpec::parse("3,0"), std::invalid_argument);
    CHECK_THROWS_AS(WeightSpec::parse("1,x"), std::invalid_argument);
}

TEST_CASE("derivative is second order") {
    double prev = 0;
    for (int n : {101, 201, 401}) {
        auto g = make_grid(3.0, n);
        Eigen::VectorXd v(n), dv(n);
        for (int i = 0; i < n; ++i) {
            v[i] = std::sin(g.node(i));
            dv[i] = std::cos(g.node(i));
        }
        const double err = (derivative(v, g.spacing()) - dv).cwiseAbs().maxCoeff();
        if (prev > 0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
        prev = err;
    }
}

TEST_CASE("fourier transform of the Gaussian") {
    auto g = make_grid(12.0, 1025);
    auto F = fourier_transform(g2(g));
    for (int k = 0; k < F.xi.size(); ++k) {
        const double xi = F.xi[k];
        if (std::abs(xi) > 8.0) continue;
        CHECK(std::abs(F.values[k] - std::exp(-0.5 * xi * xi)) <= 1e-8);
    }
    auto Z = fourier_transform(Field::zeros(g));
    CHECK(Z.values.cwiseAbs().maxCoeff() == 0.0);

    // shift theorem
    auto S = fourier_transform(g2(g, 1.0));
    for (int k = 0; k < S.xi.size(); ++k) {
        const double xi = S.xi[k];
        if (std::abs(xi) > 8.0) continue;
        const std::complex<double> want = std::exp(-0.5 * xi * xi) * std::exp(std::complex<double>(0, -xi));
        CHECK(std::abs(S.values[k] - want) <= 1e-8);
    }
}

TEST_CASE("fourier round trip, symmetry and Plancherel") {
    auto g = make_grid(8.0, 513);
    for (const auto& f : make_probes(g, 8, 3)) {
        for (int pad : {1, 2, 4}) {
            auto F = fourier_transform(f, pad);
            auto back = inverse_fourier(F);
            CHECK((back.values() - f.values()).cwiseAbs().maxCoeff() <= 1e-12 * f.values().cwiseAbs().maxCoeff());

            int i0 = 0;
            while (F.xi[i0] != 0.0) ++i0;
            for (int j = 1; i0 + j < F.xi.size() && i0 - j >= 0; ++j) {
                CHECK(F.xi[i0 + j] == doctest::Approx(-F.xi[i0 - j]));
                CHECK(std::abs(F.values[i0 + j] - std::conj(F.values[i0 - j])) <= 1e-12);
            }
        }
    }

    // Plancherel vs the physical L2 norm on a compactly supported smooth bump
    auto bump = Field::sample(g, [](double x) { return std::abs(x) < 2 ? std::exp(-1.0 / (1 - x * x / 4)) : 0.0; });
    const double l2 = weighted_norm(bump, {2, 0.0, 0});
    CHECK(plancherel_l2_squared(fourier_transform(bump)) == doctest::Approx(l2 * l2).epsilon(1e-8));

    CHECK(next_pow2(513) == 1024);
    CHECK(next_pow2(1024) == 1024);
}

TEST_CASE("quadrature") {
    CHECK(integrate([](double x) { return std::cos(x); }, 0, pi / 2, 4) == doctest::Approx(1.0).epsilon(1e-14));
    // x^{-1/2} on [a, 1]
    const double a = 1e-12;
    CHECK(integrate_graded([](double x) { return 1 / std::sqrt(x); }, a, 1.0, 2.0, 0.1) ==
          doctest::Approx(2 - 2 * std::sqrt(a)).epsilon(1e-12));
    CHECK(integrate_breaks([](double x) { return std::abs(x); }, {-1, 0, 2}, 1) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0, 1, 0), std::invalid_argument);
}

TEST_CASE("probes") {
    auto g = make_grid(12.0, 501);
    auto a = make_probes(g, 32, 9);
    auto b = make_probes(g, 32, 9);
    auto c = make_probes(g, 32, 10);
    REQUIRE(a.size() == 32);
    bool differs = false;
    for (int i = 0; i < 32; ++i) {
        CHECK(a[i].values() == b[i].values());
        CHECK(a[i].values().norm() > 0);
        // localized: negligible at the boundary
        CHECK(std::abs(a[i][0]) <= 1e-8 * a[i].values().cwiseAbs().maxCoeff());
        CHECK(std::abs(a[i][g.size() - 1]) <= 1e-8 * a[i].values().cwiseAbs().maxCoeff());
        differs = differs || a[i].values() != c[i].values();
    }
    CHECK(differs);
    CHECK_THROWS_AS(make_probes(make_grid(1.0, 21), 4, 1, {24, 1.0, 1.5, 2.0}), std::invalid_argument);

    std::set<std::uint64_t> seeds;
    for (std::uint64_t j = 0; j < 1000; ++j) seeds.insert(mix_seed(42, j));
    CHECK(seeds.size() == 1000);
}

TEST_CASE("hermite functions are orthonormal") {
    auto g = make_grid(20.0, 4001);
    for (int m = 0; m < 12; m += 3)
        for (int n = 0; n < 12; n += 2) {
            Eigen::VectorXd v(g.size());
            for (int i = 0; i < g.size(); ++i) v[i] = hermite_function(m, g.node(i)) * hermite_function(n, g.node(i));
            CHECK(trapezoid(v, g.spacing()) == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
        }
}

TEST_CASE("matrix exponential and eigenvalues") {
    Eigen::MatrixXd J(2, 2);
    J << 0, 1, -1, 0;
    auto R = expm(1.3 * J);
    CHECK(R(0, 0) == doctest::Approx(std::cos(1.3)));
    CHECK(R(0, 1) == doctest::Approx(std::sin(1.3)));

    // symmetric case against a self-adjoint eigendecomposition
    std::mt19937_64 rng(1);
    std::normal_distribution<double> N;
    Eigen::MatrixXd A(40, 40);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 40; ++j) A(i, j) = N(rng);
    Eigen::MatrixXd S = 0.1 * (A + A.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    Eigen::MatrixXd oracle = es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
                             es.eigenvectors().transpose();
    CHECK((expm(S) - oracle).norm() <= 1e-12 * oracle.norm());

    auto ev = eigenvalues(S);
    REQUIRE(ev.size() == 40);
    for (std::size_t i = 0; i < ev.size(); ++i) {
        CHECK(std::abs(ev[i].real() - es.eigenvalues()[39 - i]) <= 1e-10);
        if (i) CHECK(ev[i - 1].real() >= ev[i].real());
    }
}

TEST_CASE("field csv round trip") {
    auto g = make_grid(4.0, 17);
    auto f = g2(g);
    const std::string path = "test_core_field.csv";
    write_csv(path, f);
    auto r = read_csv(path);
    std::remove(path.c_str());
    CHECK(r.grid() == g);
    CHECK((r.values() - f.values()).cwiseAbs().maxCoeff() <= 1e-15);
}
