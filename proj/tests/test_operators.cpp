#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <variant>
#include <vector>

#include "fplab/operators.hpp"
#include "fplab/semigroup.hpp"

using namespace fplab;
using std::numbers::pi;

namespace {
Field g2(const Grid1D& g, double shift = 0.0) {
    return Field::sample(g, [shift](double x) { return std::exp(-0.5 * (x - shift) * (x - shift)) / std::sqrt(2 * pi); });
}

struct Case {
    ModelSpec model;
    Grid1D grid;
};
std::vector<Case> all_models() {
    return {
        {classical(), make_grid(12.0, 401)},
        {discrete_classical(0.4), grid_with_spacing(10.0, 0.05)},
        {fractional(1.2), make_grid(30.0, 601)},
        {fractional(0.7, 1.3), make_grid(30.0, 601)},
        {discrete_fractional(0.2, 1.0), make_grid(20.0, 401)},
    };
}

double l1(const Eigen::VectorXd& v, const Grid1D& g) { return weighted_norm(v, g, {1, 0.0, 0}); }
}  // namespace

TEST_CASE("full generators: conservation, positivity structure, symmetry") {
    for (const auto& c : all_models()) {
        CAPTURE(describe(c.model));
        auto op = assemble(c.model, c.grid);
        CHECK(op.role == OperatorRole::Full);
        CHECK(op.conservation_defect <= 1e-12 * op.entries.cwiseAbs().maxCoeff());

        const int n = op.size();
        double min_off = 0.0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if (i != j) min_off = std::min(min_off, op.entries(i, j));
        CHECK(min_off >= 0.0);

        CHECK(apply(op, Field::zeros(c.grid)).values().cwiseAbs().maxCoeff() == 0.0);

        // even data stays even
        auto even = Field::sample(c.grid, [](double x) { return std::exp(-x * x) * (1 + x * x); });
        auto r = apply(op, even).values();
        double asym = 0;
        for (int i = 0; i < n; ++i) asym = std::max(asym, std::abs(r[i] - r[n - 1 - i]));
        CHECK(asym <= 1e-12 * r.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("classical generator annihilates the Gaussian") {
    auto g = make_grid(12.0, 1025);
    auto op = assemble(classical(), g);
    CHECK(l1(apply(op, g2(g)).values(), g) <= 1e-6);
}

TEST_CASE("fractional generator on its Fourier-side equilibrium") {
    auto g = make_grid(60.0, 2049);
    auto op = assemble(fractional(1.5), g);
    auto G = fourier_steady_oracle(fractional(1.5), g);
    CHECK(l1(apply(op, G).values(), g) <= 5e-3);
}

TEST_CASE("discrete-classical preconditions") {
    CHECK_THROWS_AS(assemble(discrete_classical(0.1), make_grid(10.0, 401)), std::invalid_argument);
    CHECK_THROWS_AS(assemble(fractional(1.0), make_grid(100.0, 201)), std::invalid_argument);
    CHECK_THROWS_AS(assemble(fractional(2.0), make_grid(10.0, 201)), std::invalid_argument);
}

TEST_CASE("model parsing") {
    CHECK(std::holds_alternative<Classical>(parse_model("classical")));
    auto dc = std::get<DiscreteClassical>(parse_model("discrete-classical:0.2"));
    CHECK(dc.eps == 0.2);
    auto fr = std::get<Fractional>(parse_model("fractional:1.5"));
    CHECK(fr.alpha == 1.5);
    CHECK(fr.c == c_alpha(1.5));
    CHECK(std::get<Fractional>(parse_model("fractional:1,1")).c == 1.0);
    auto df = std::get<DiscreteFractional>(parse_model("discrete-fractional:0.1,1"));
    CHECK(df.eps == 0.1);
    CHECK(df.alpha == 1.0);
    CHECK_THROWS_AS(parse_model("quantum"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model("fractional:abc"), std::invalid_argument);
    CHECK_THROWS_AS(jump_kernel(classical()), std::invalid_argument);
    CHECK(jump_kernel(fractional(1.0)).family() == Kernel::Family::Singular);
}

TEST_CASE("cutoff") {
    CHECK(cutoff(0.0) == 1.0);
    CHECK(cutoff(1.0) == 1.0);
    CHECK(cutoff(2.0) == 0.0);
    CHECK(cutoff(-3.0) == 0.0);
    double prev = 1.0;
    for (double x = 1.0; x <= 2.0; x += 1e-3) {
        const double c = cutoff(x);
        CHECK(c <= prev);
        CHECK(c >= 0.0);
        prev = c;
    }
    // C^2: one-sided second differences vanish at the joins
    const double d = 1e-4;
    CHECK(std::abs(cutoff(1 + 2 * d) - 2 * cutoff(1 + d) + 1) / (d * d) <= 1e-2);
    CHECK(std::abs(cutoff(2 - 2 * d) - 2 * cutoff(2 - d)) / (d * d) <= 1e-2);
    CHECK(cutoff(3.0, 2.0) == cutoff(1.5));
}

TEST_CASE("classical splitting") {
    auto g = make_grid(12.0, 241);
    auto full = assemble(classical(), g);

    auto [A0, B0] = assemble_splitting(classical(), g, ClassicalSplit{0.0, 1.0});
    CHECK(A0.entries.cwiseAbs().maxCoeff() == 0.0);
    CHECK(B0.entries == full.entries);

    auto [A, B] = assemble_splitting(classical(), g, ClassicalSplit{5.0, 4.0});
    CHECK(A.role == OperatorRole::PartA);
    CHECK(B.role == OperatorRole::PartB);
    for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < g.size(); ++j)
            CHECK(A.entries(i, j) == (i == j ? 5.0 * cutoff(g.node(i) / 4.0) : 0.0));
    CHECK(((A.entries + B.entries) - full.entries).cwiseAbs().maxCoeff() <= 1e-12 * full.entries.cwiseAbs().maxCoeff());

    // apply(A + B) = apply(Lambda)
    for (const auto& f : make_probes(g, 4, 2)) {
        Eigen::VectorXd lhs = apply(A, f).values() + apply(B, f).values();
        CHECK((lhs - apply(full, f).values()).cwiseAbs().maxCoeff() <= 1e-12 * full.entries.cwiseAbs().maxCoeff());
    }
    CHECK_THROWS_AS(assemble_splitting(discrete_fractional(0.1, 1.0), make_grid(20, 401), ClassicalSplit{1, 1}),
                    std::invalid_argument);
}

TEST_CASE("fractional splitting zero pattern") {
    auto g = make_grid(8.0, 321);  // h = 0.05 so eta = 0.1 = 2h
    auto [A, B] = assemble_splitting(fractional(1.0), g, FractionalSplit{0.1, 1.0, 2.0});
    auto full = assemble(fractional(1.0), g);
    CHECK(((A.entries + B.entries) - full.entries).cwiseAbs().maxCoeff() <= 1e-12 * full.entries.cwiseAbs().maxCoeff());
    int nonzero = 0;
    for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < g.size(); ++j) {
            const double xi = g.node(i), xj = g.node(j), z = std::abs(xi - xj);
            const bool must_vanish = z <= 0.1 + 1e-12 || z >= 2.0 - 1e-12 || (std::abs(xi) >= 4.0 && std::abs(xj) >= 4.0);
            if (must_vanish) CHECK(A.entries(i, j) == 0.0);
            if (A.entries(i, j) != 0.0) ++nonzero;
            CHECK(A.entries(i, j) >= 0.0);
        }
    CHECK(nonzero > 0);
    CHECK_THROWS_AS(assemble_splitting(fractional(1.0), g, FractionalSplit{0.05, 1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("A is bounded uniformly in eps") {
    // smooth probes spread over the support of chi_R; narrow ones only see the smoothing of k_eps
    const ProbeOptions smooth{2, 1.2, 1.6, 4.0};
    std::vector<double> norms;
    for (double eps : {0.4, 0.2, 0.1}) {
        auto g = grid_with_spacing(20.0, eps / 8);
        auto [A, B] = assemble_splitting(discrete_classical(eps), g, ClassicalSplit{1.0, 3.0});
        OperatorMatrix zero{g, Eigen::MatrixXd::Zero(g.size(), g.size()), OperatorRole::Full, "zero"};
        norms.push_back(operator_distance(A, zero, {2, 0.0, 0}, {2, 1.0, 0}, 32, 4, smooth));
    }
    const double lo = *std::min_element(norms.begin(), norms.end());
    const double hi = *std::max_element(norms.begin(), norms.end());
    CHECK(hi / lo - 1.0 <= 0.10);

    std::vector<double> frac;
    for (double eps : {0.2, 0.1, 0.05}) {
        auto g = make_grid(20.0, 801);
        auto [A, B] = assemble_splitting(discrete_fractional(eps, 1.0), g, FractionalSplit{0.2, 4.0, 3.0});
        OperatorMatrix zero{g, Eigen::MatrixXd::Zero(g.size(), g.size()), OperatorRole::Full, "zero"};
        frac.push_back(operator_distance(A, zero, {2, 0.0, 0}, {2, 1.0, 0}, 32, 4, smooth));
    }
    CHECK(*std::max_element(frac.begin(), frac.end()) / *std::min_element(frac.begin(), frac.end()) - 1.0 <= 0.10);
}

TEST_CASE("operator distance") {
    auto g = make_grid(12.0, 241);
    auto op = assemble(classical(), g);
    CHECK(operator_distance(op, op, {2, 1.0, 3}, {2, 1.0, 0}, 16, 1) == 0.0);
    auto other = assemble(fractional(1.0), g);
    CHECK(operator_distance(op, other, {2, 0.0, 0}, {2, 0.0, 0}, 16, 1) > 0.0);
}

TEST_CASE("discrete-classical converges to classical at first order") {
    std::vector<double> d;
    const std::vector<double> eps{0.4, 0.2, 0.1};
    for (double e : eps) {
        auto g = grid_with_spacing(8.0, 0.0125);
        d.push_back(operator_distance(assemble(discrete_classical(e), g), assemble(classical(), g), {2, 1.0, 3},
                                      {2, 1.0, 0}, 32, 3));
    }
    const double slope = std::log(d[0] / d[2]) / std::log(eps[0] / eps[2]);
    CHECK(slope >= 0.8);
    CHECK(d[1] / eps[1] <= 1.5 * d[0] / eps[0]);
    CHECK(d[2] / eps[2] <= 1.5 * d[1] / eps[1]);
}

TEST_CASE("discrete-fractional approaches its limit") {
    // h = eps/2 at the smallest eps so the plateau is resolved
    auto g = make_grid(16.0, 1281);
    auto lim = assemble(fractional_limit(1.0), g);
    double prev = 1e300;
    for (double e : {0.2, 0.1, 0.05}) {
        const double d = operator_distance(assemble(discrete_fractional(e, 1.0), g), lim, {2, 1.0, 2}, {2, 1.0, 0}, 32, 3);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("jump stencil and dumps") {
    auto g = make_grid(10.0, 201);
    auto st = jump_stencil(Kernel::singular(1.0, 1.0), g);
    REQUIRE(st.rate.size() == 201u);
    const double h = g.spacing();
    CHECK(st.rate[5] == doctest::Approx(h * std::pow(5 * h, -2.0)));
    CHECK(st.tail > 0.0);
    CHECK_THROWS_AS(jump_stencil(gaussian_reference_kernel(), g), std::invalid_argument);

    std::ostringstream os;
    dump_matrix(os, assemble(classical(), make_grid(1.0, 3)), false);
    CHECK(os.str().rfind("# fplab-matrix n=3", 0) == 0);
}
