#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fplab/error.hpp"
#include "fplab/operators.hpp"
#include "fplab/probes.hpp"
#include "fplab/semigroup.hpp"

using namespace fplab;
using std::numbers::pi;

namespace {
Field g2(const Grid1D& g, double shift = 0.0) {
    return Field::sample(g, [shift](double x) { return std::exp(-0.5 * (x - shift) * (x - shift)) / std::sqrt(2 * pi); });
}

double min_interior(const Field& f) {
    double m = 1e300;
    for (int i = 1; i + 1 < f.size(); ++i) m = std::min(m, f[i]);
    return m;
}
}  // namespace

TEST_CASE("evolve to t = 0 is the identity") {
    auto g = make_grid(12.0, 201);
    auto op = assemble(classical(), g);
    auto f0 = g2(g, 1.0);
    for (auto s : {TimeScheme::BackwardEuler, TimeScheme::CrankNicolson, TimeScheme::ExactExpm}) {
        auto tr = evolve(op, f0, {0.0, 0.01, s, 1});
        REQUIRE(tr.size() == 1u);
        CHECK(tr[0].t == 0.0);
        CHECK(tr[0].f.values() == f0.values());
    }
}

TEST_CASE("classical equilibrium is stationary") {
    auto g = make_grid(12.0, 1025);
    auto op = assemble(classical(), g);
    auto tr = evolve(op, g2(g), {1.0, 0.01, TimeScheme::BackwardEuler, 100});
    CHECK(l1_distance(tr.back().f, g2(g)) <= 1e-8);
}

TEST_CASE("Ornstein-Uhlenbeck exact solution") {
    // a Gaussian datum N(m0, s0^2) stays Gaussian: mean m0 e^{-t}, variance 1 + (s0^2 - 1) e^{-2t}
    auto g = make_grid(12.0, 1025);
    auto op = assemble(classical(), g);
    const double m0 = 1.5, s0 = 0.3;
    auto f0 = Field::sample(g, [&](double x) { return gaussian_density(x, m0, s0); });
    auto tr = evolve(op, f0, {5.0, 0.5, TimeScheme::ExactExpm, 1});
    for (const auto& snap : tr) {
        const double t = snap.t;
        const double m = m0 * std::exp(-t), s = std::sqrt(1 + (s0 * s0 - 1) * std::exp(-2 * t));
        auto exact = Field::sample(g, [&](double x) { return gaussian_density(x, m, s); });
        CHECK(l1_distance(snap.f, exact) <= 1e-4);
    }
    // from a narrow bump the distance to G2 at t = 5 is below the e^{-5} envelope
    auto bump = Field::sample(g, [](double x) { return gaussian_density(x, 0.0, 0.1); });
    auto end = evolve(op, bump, {5.0, 0.25, TimeScheme::ExactExpm, 20}).back().f;
    CHECK(l1_distance(end, g2(g)) <= 2e-2 * std::exp(-5.0) + 1e-6);
}

TEST_CASE("mass and positivity along trajectories") {
    struct Case {
        ModelSpec model;
        Grid1D grid;
    };
    const std::vector<Case> cases{
        {classical(), make_grid(12.0, 241)},
        {discrete_classical(0.2), grid_with_spacing(8.0, 0.025)},
        {fractional(1.0), make_grid(30.0, 301)},
        {discrete_fractional(0.1, 1.2), make_grid(20.0, 401)},
    };
    for (const auto& c : cases) {
        CAPTURE(describe(c.model));
        auto op = assemble(c.model, c.grid);
        auto f0 = Field::sample(c.grid, [](double x) { return std::exp(-4 * (x - 2) * (x - 2)) + 0.5 * std::exp(-(x + 1) * (x + 1)); });
        const double m0 = mass(f0);
        for (auto s : {TimeScheme::BackwardEuler, TimeScheme::ExactExpm}) {
            auto tr = evolve(op, f0, {2.0, default_dt(c.model), s, 10});
            for (const auto& snap : tr) {
                CHECK(std::abs(mass(snap.f) - m0) <= 1e-12);
                if (s == TimeScheme::BackwardEuler) CHECK(snap.f.values().minCoeff() >= -1e-12);
            }
        }
        auto G = steady_state(op);
        CHECK(mass(G) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(min_interior(G) > 0.0);
    }
}

TEST_CASE("semigroup property") {
    auto g = make_grid(20.0, 301);
    auto op = assemble(fractional(1.3), g);
    auto f0 = make_probes(g, 1, 8)[0];
    auto whole = evolve(op, f0, {1.7, 0.1, TimeScheme::ExactExpm, 1000}).back().f;
    auto half = evolve(op, f0, {0.6, 0.1, TimeScheme::ExactExpm, 1000}).back().f;
    auto rest = evolve(op, half, {1.1, 0.1, TimeScheme::ExactExpm, 1000}).back().f;
    CHECK((whole.values() - rest.values()).cwiseAbs().maxCoeff() <= 1e-10 * f0.values().cwiseAbs().maxCoeff());

    CHECK_THROWS_AS(evolve(assemble(classical(), make_grid(12, 2051)), Field::zeros(make_grid(12, 2051)),
                           {1.0, 0.1, TimeScheme::ExactExpm, 1}),
                    std::invalid_argument);
}

TEST_CASE("steady states") {
    auto g = make_grid(12.0, 1025);
    SteadyStateInfo info;
    auto G = steady_state(assemble(classical(), g), &info);
    CHECK(l1_distance(G, g2(g)) <= 1e-6);
    CHECK(info.residual_l1 <= 1e-10 * info.operator_norm);

    // heavy tail G(x) ~ <x>^{-1-alpha}. Jumps that would leave [-L, L] are censored, so the
    // far tail is depleted (G <x>^2 drops to ~0.4 of its peak by x = 40 on L = 60); the law is
    // checked on the grid where the truncation is mild and on the untruncated oracle further out
    auto gf = make_grid(60.0, 1201);
    auto Gf = steady_state(assemble(fractional(1.0), gf));
    auto Of = fourier_steady_oracle(fractional(1.0), gf);
    auto spread = [&](const Field& f, double a, double b) {
        double lo = 1e300, hi = 0;
        for (int i = 0; i < gf.size(); ++i) {
            const double x = gf.node(i);
            if (x < a || x > b) continue;
            const double r = f[i] * (1 + x * x);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        return hi / lo;
    };
    CHECK(spread(Gf, 5.0, 25.0) <= 2.0);
    CHECK(spread(Of, 10.0, 40.0) <= 2.0);

    OperatorMatrix part = assemble(classical(), make_grid(5, 21));
    part.role = OperatorRole::PartB;
    CHECK_THROWS_AS(steady_state(part), std::invalid_argument);

    // two decoupled blocks: the null space is two-dimensional
    OperatorMatrix two = assemble(classical(), make_grid(5, 21));
    two.entries.setZero();
    CHECK_THROWS_AS(steady_state(two), NumericalError);
}

TEST_CASE("fourier steady oracle") {
    // kappa = 1 at alpha = 1 (c = 1/pi): the standard Cauchy law
    auto g = make_grid(60.0, 2049);
    auto C = fourier_steady_oracle(fractional(1.0, 1.0 / pi), g);
    double err = 0;
    for (int i = 0; i < g.size(); ++i) {
        const double x = g.node(i);
        err = std::max(err, std::abs(C[i] - 1.0 / (pi * (1 + x * x))));
    }
    CHECK(err <= 1e-5);

    // alpha -> 2 is Gaussian
    auto gg = make_grid(12.0, 1025);
    auto near2 = fourier_steady_oracle(fractional(1.999, 1.0 / fractional_symbol_constant(1.999, 1.0)), gg);
    CHECK(l1_distance(near2, g2(gg)) <= 5e-3);

    // discrete-classical oracle tends to G2 as eps -> 0
    double prev = 1e300;
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        const double d = l1_distance(fourier_steady_oracle(discrete_classical(eps), gg), g2(gg));
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev <= 1e-2);

    for (double eps : {0.4, 0.1}) {
        auto G = fourier_steady_oracle(discrete_classical(eps), gg);
        CHECK(mass(G) == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK(diffusion_symbol(classical(), 2.0) == doctest::Approx(4.0));
}

TEST_CASE("discrete-classical steady state vs the Fourier oracle") {
    // the gap is first order in h (upwinded drift): ~8e-3 at h = eps/8, halving with h
    const double eps = 0.2;
    std::vector<double> d;
    for (double h : {eps / 8, eps / 16}) {
        auto g = grid_with_spacing(10.0, h);
        d.push_back(l1_distance(steady_state(assemble(discrete_classical(eps), g)),
                                fourier_steady_oracle(discrete_classical(eps), g)));
    }
    CHECK(d[0] <= 1e-2);
    CHECK(d[1] / d[0] == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("decay rates") {
    auto g = make_grid(12.0, 513);
    auto op = assemble(classical(), g);
    auto r = decay_rate(op, g2(g, 1.0), {1, 1.0, 0}, {8.0, 0.25, TimeScheme::ExactExpm, 1});
    CHECK(r.projected);
    CHECK(r.rate == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(r.clean);
    for (double v : r.norms) CHECK(v >= 0.0);
    // eventually decreasing
    for (std::size_t k = r.norms.size() / 2; k + 1 < r.norms.size(); ++k) CHECK(r.norms[k + 1] <= r.norms[k]);

    auto G = steady_state(op);
    auto eq = decay_rate(op, G, {1, 1.0, 0}, {4.0, 0.5, TimeScheme::ExactExpm, 1});
    CHECK(eq.skipped);

    // odd datum for alpha = 1.5: the first odd mode decays like e^{-t}
    auto gf = make_grid(40.0, 801);
    auto opf = assemble(fractional(1.5), gf);
    auto odd = Field::sample(gf, [](double x) { return x * std::exp(-x * x); });
    auto rf = decay_rate(opf, odd, {1, 0.5, 0}, {8.0, 0.25, TimeScheme::ExactExpm, 1});
    CHECK_FALSE(rf.projected);
    CHECK(rf.rate == doctest::Approx(-1.0).epsilon(0.1));
}

TEST_CASE("uniform decay sweep") {
    FamilySweep empty;
    empty.family = ModelFamily::Fractional;
    empty.grid_for = [](double) { return make_grid(20.0, 201); };
    empty.initial = [](const Grid1D& g) { return Field::sample(g, [](double x) { return x * std::exp(-x * x); }); };
    auto r = uniform_decay_sweep(empty, {1, 0.5, 0}, {4.0, 0.5, TimeScheme::ExactExpm, 1}, -0.8);
    CHECK(r.rows.empty());
    CHECK(r.pass);
    CHECK_FALSE(r.warning.empty());

    FamilySweep s = empty;
    s.params = {1.0, 1.8};
    s.grid_for = [](double) { return make_grid(40.0, 801); };
    auto rs = uniform_decay_sweep(s, {1, 0.5, 0}, {8.0, 0.25, TimeScheme::ExactExpm, 1}, -0.8);
    REQUIRE(rs.rows.size() == 2u);
    CHECK(rs.rows[0].param == 1.0);
    CHECK(rs.pass);
    for (const auto& row : rs.rows) CHECK(row.report.rate <= -0.8);

    // a failing parameter is recorded, the sweep continues
    FamilySweep bad = s;
    bad.params = {2.5, 1.8};
    auto rb = uniform_decay_sweep(bad, {1, 0.5, 0}, {8.0, 0.25, TimeScheme::ExactExpm, 1}, -0.8);
    REQUIRE(rb.rows.size() == 2u);
    CHECK_FALSE(rb.rows[0].error.empty());
    CHECK(rb.rows[1].error.empty());
    CHECK_FALSE(rb.pass);
}

TEST_CASE("scheme and family names") {
    CHECK(parse_time_scheme(to_string(TimeScheme::CrankNicolson)) == TimeScheme::CrankNicolson);
    CHECK_THROWS_AS(parse_time_scheme("rk4"), std::invalid_argument);
    CHECK(parse_family(to_string(ModelFamily::DiscreteFractional)) == ModelFamily::DiscreteFractional);
    CHECK(default_dt(discrete_classical(0.1)) == doctest::Approx(0.005));
    CHECK(default_dt(classical()) == 0.01);
}
