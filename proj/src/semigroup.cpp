#include "fplab/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/LU>

#include "fplab/error.hpp"
#include "fplab/fourier.hpp"
#include "fplab/linalg.hpp"

namespace fplab {

std::string to_string(TimeScheme s) {
    switch (s) {
    case TimeScheme::BackwardEuler: return "backward-euler";
    case TimeScheme::CrankNicolson: return "crank-nicolson";
    case TimeScheme::ExactExpm: return "exact-expm";
    }
    return "?";
}

TimeScheme parse_time_scheme(const std::string& s) {
    if (s == "backward-euler" || s == "be") return TimeScheme::BackwardEuler;
    if (s == "crank-nicolson" || s == "cn") return TimeScheme::CrankNicolson;
    if (s == "exact-expm" || s == "expm") return TimeScheme::ExactExpm;
    throw std::invalid_argument("unknown time scheme '" + s + "'");
}

double default_dt(const ModelSpec& m) {
    if (const auto* dc = std::get_if<DiscreteClassical>(&m)) return std::min(0.01, 0.5 * dc->eps * dc->eps);
    return 0.01;
}

Trajectory evolve(const OperatorMatrix& op, const Field& f0, const EvolveSpec& spec) {
    if (op.grid != f0.grid()) throw std::invalid_argument("evolve: initial datum lives on a different grid");
    if (!(spec.dt > 0.0) || !(spec.t_end >= 0.0) || !std::isfinite(spec.t_end))
        throw std::invalid_argument("evolve: need dt > 0 and t_end >= 0");
    if (spec.record_every < 1) throw std::invalid_argument("evolve: record_every must be >= 1");
    const int n = op.size();
    if (spec.scheme == TimeScheme::ExactExpm && n > kExpmMaxSize)
        throw std::invalid_argument("ExactExpm is limited to n <= " + std::to_string(kExpmMaxSize));

    Trajectory out;
    out.push_back({0.0, f0});
    if (spec.t_end == 0.0) return out;

    const long steps = std::max<long>(1, static_cast<long>(std::ceil(spec.t_end / spec.dt - 1e-9)));
    const double dt = spec.t_end / static_cast<double>(steps);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);

    Eigen::MatrixXd P;                      // explicit propagator (ExactExpm)
    Eigen::MatrixXd Rhs;                    // CN right-hand operator
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    switch (spec.scheme) {
    case TimeScheme::BackwardEuler: lu.compute(I - dt * op.entries); break;
    case TimeScheme::CrankNicolson:
        lu.compute(I - 0.5 * dt * op.entries);
        Rhs = I + 0.5 * dt * op.entries;
        break;
    case TimeScheme::ExactExpm: P = expm(dt * op.entries); break;
    }

    Eigen::VectorXd f = f0.values();
    for (long k = 1; k <= steps; ++k) {
        switch (spec.scheme) {
        case TimeScheme::BackwardEuler: f = lu.solve(f); break;
        case TimeScheme::CrankNicolson: f = lu.solve(Rhs * f); break;
        case TimeScheme::ExactExpm: f = P * f; break;
        }
        if (!f.allFinite()) throw NumericalError("non-finite state at step " + std::to_string(k));
        if (k % spec.record_every == 0 || k == steps) out.push_back({k * dt, Field(op.grid, f)});
    }
    out.back().t = spec.t_end;
    return out;
}

Field steady_state(const OperatorMatrix& op, SteadyStateInfo* info) {
    if (op.role != OperatorRole::Full) throw std::invalid_argument("steady_state needs a full generator");
    const int n = op.size();
    const Grid1D& g = op.grid;
    constexpr double shift = 1e-8;
    constexpr int max_iter = 200;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(op.entries - shift * Eigen::MatrixXd::Identity(n, n));
    Eigen::VectorXd omega = Eigen::VectorXd::Constant(n, g.spacing());
    omega[0] *= 0.5;
    omega[n - 1] *= 0.5;

    const double norm = op.entries.cwiseAbs().colwise().sum().maxCoeff();
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    int it = 0;
    for (; it < max_iter; ++it) {
        Eigen::VectorXd y = lu.solve(x);
        if (!y.allFinite()) throw NumericalError("steady_state: inverse iteration diverged");
        y /= y.norm();
        const double rayleigh = std::abs(y.dot(op.entries * y));
        const double change = std::min((y - x / x.norm()).norm(), (y + x / x.norm()).norm());
        x = y;
        if (rayleigh <= 1e-12 * std::max(1.0, norm) || change < 1e-14) break;
    }
    const double m = omega.dot(x);
    if (!(std::abs(m) > 0.0)) throw NumericalError("steady_state: null vector has zero mass");
    x /= m;

    // Simplicity of the zero eigenvalue: the zero-mass subspace is invariant;
    // inverse iteration there estimates the next smallest |lambda|.
    Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0) + 0.3 * Eigen::VectorXd::LinSpaced(n, 0.0, 1.0).cwiseAbs2();
    double next = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 30; ++k) {
        z -= (omega.dot(z) / omega.dot(x)) * x;
        z /= z.norm();
        Eigen::VectorXd y = lu.solve(z);
        next = 1.0 / y.norm();
        z = y;
    }
    if (next < 1e-6)
        throw NumericalError("spectral projector rank != 1: a second eigenvalue within " + std::to_string(next) +
                             " of zero");

    Field G(g, x);
    if (info) {
        info->residual_l1 = weighted_norm(op.entries * x, g, WeightSpec{1, 0.0, 0});
        info->operator_norm = norm;
        info->next_modulus = next;
        info->iterations = it + 1;
    }
    return G;
}

double diffusion_symbol(const ModelSpec& model, double s) {
    s = std::abs(s);
    if (std::holds_alternative<Classical>(model)) return s * s;
    if (const auto* dc = std::get_if<DiscreteClassical>(&model))
        return dc->kernel.symbol(dc->eps * s) / (dc->eps * dc->eps);
    return jump_kernel(model).symbol(s);
}

Field fourier_steady_oracle(const ModelSpec& model, const Grid1D& grid, int pad_factor) {
    validate(model);
    SpectralField sf = spectral_layout(grid, pad_factor);
    const int N = sf.padded;
    const double dxi = sf.dxi();
    const int half = N / 2;  // xi = k dxi for k = 0..half
    std::vector<double> ghat(half + 1, 0.0);

    if (std::holds_alternative<Classical>(model)) {
        for (int k = 0; k <= half; ++k) ghat[k] = std::exp(-0.5 * (k * dxi) * (k * dxi));
    } else if (const auto* fr = std::get_if<Fractional>(&model)) {
        const double kappa = fractional_symbol_constant(fr->alpha, fr->c);
        for (int k = 0; k <= half; ++k) ghat[k] = std::exp(-kappa * std::pow(k * dxi, fr->alpha) / fr->alpha);
    } else {
        // exponent F(xi) = int_0^xi sigma(s)/s ds by cumulative Simpson; sigma(s)/s -> 0 at s = 0
        auto integrand = [&](double s) { return s == 0.0 ? 0.0 : diffusion_symbol(model, s) / s; };
        double F = 0.0;
        double left = 0.0;
        ghat[0] = 1.0;
        for (int k = 1; k <= half; ++k) {
            const double a = (k - 1) * dxi;
            const double mid = integrand(a + 0.5 * dxi);
            const double right = integrand(k * dxi);
            F += dxi / 6.0 * (left + 4.0 * mid + right);
            left = right;
            if (!std::isfinite(F)) throw NumericalError("fourier_steady_oracle: quadrature failure at xi = " + std::to_string(k * dxi));
            ghat[k] = std::exp(-F);
            if (F > 80.0) break;  // Ghat < 1e-35 from here on
        }
    }
    for (int pos = 0; pos < N; ++pos) {
        const long k = std::lround(std::abs(sf.xi[pos]) / dxi);
        sf.values[pos] = (k <= half) ? ghat[k] : 0.0;
    }
    return inverse_fourier(sf);
}

void fit_decay(DecayReport& r, const DecayOptions& opt) {
    const std::size_t m = r.times.size();
    if (m < 2) {
        r.skipped = true;
        r.message = "too few samples to fit";
        return;
    }
    const double t_end = r.times.back();
    const double norm0 = r.norms.front();
    if (!(norm0 > 0.0) || *std::max_element(r.norms.begin(), r.norms.end()) <= 1e-14) {
        r.skipped = true;
        r.message = "norms ~ 0 at all times, fit skipped";
        return;
    }
    const double lo = opt.t_lo > 0.0 ? opt.t_lo : 0.5 * t_end;
    const double hi = opt.t_hi > 0.0 ? opt.t_hi : t_end;
    const double stop = 100.0 * opt.floor_rel * norm0;

    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < m; ++i) {
        if (r.times[i] < lo - 1e-12 || r.times[i] > hi + 1e-12) continue;
        if (r.norms[i] <= stop) break;
        ts.push_back(r.times[i]);
        ys.push_back(std::log(r.norms[i]));
    }
    if (ts.size() < 3) {
        // window hit the floor: fall back to everything above it after t = 0
        ts.clear();
        ys.clear();
        for (std::size_t i = 1; i < m && r.norms[i] > stop; ++i) {
            ts.push_back(r.times[i]);
            ys.push_back(std::log(r.norms[i]));
        }
    }
    if (ts.size() < 2) {
        r.skipped = true;
        r.message = "norms reach the quadrature floor immediately, fit skipped";
        return;
    }
    const double k = static_cast<double>(ts.size());
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sy += ys[i];
        stt += ts[i] * ts[i];
        sty += ts[i] * ys[i];
    }
    const double den = k * stt - st * st;
    const double slope = (k * sty - st * sy) / den;
    const double icpt = (sy - slope * st) / k;
    double ss = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double e = ys[i] - (icpt + slope * ts[i]);
        ss += e * e;
    }
    r.rate = slope;
    r.prefactor = std::exp(icpt) / norm0;
    r.fit_lo = ts.front();
    r.fit_hi = ts.back();
    r.fit_points = static_cast<int>(ts.size());
    r.residual = std::sqrt(ss / k);
    r.clean = r.residual <= opt.max_residual;
    if (!r.clean) r.message = "mixed modes - widen window";
}

DecayReport decay_rate(const OperatorMatrix& op, const Field& f0, const WeightSpec& w, const EvolveSpec& spec,
                       const DecayOptions& opt) {
    w.validate();
    DecayReport r;
    r.weight = w.describe();
    Eigen::VectorXd g0 = f0.values();
    const double m0 = mass(f0);
    const double scale = weighted_norm(f0, WeightSpec{1, 0.0, 0});
    if (std::abs(m0) > 1e-14 * std::max(scale, 1e-300)) {
        const Field G = steady_state(op);
        g0 -= m0 * G.values();
        r.projected = true;
    }
    const Trajectory traj = evolve(op, Field(f0.grid(), g0), spec);
    for (const auto& s : traj) {
        r.times.push_back(s.t);
        r.norms.push_back(weighted_norm(s.f, w));
    }
    if (r.projected && r.norms.front() <= 1e-12 * std::max(scale, 1e-300)) {
        r.skipped = true;
        r.message = "initial datum is the equilibrium: norms ~ 0 at all times, fit skipped";
        return r;
    }
    fit_decay(r, opt);
    return r;
}

std::string to_string(ModelFamily f) {
    switch (f) {
    case ModelFamily::Classical: return "classical";
    case ModelFamily::DiscreteClassical: return "discrete-classical";
    case ModelFamily::Fractional: return "fractional";
    case ModelFamily::DiscreteFractional: return "discrete-fractional";
    }
    return "?";
}

ModelFamily parse_family(const std::string& s) {
    if (s == "classical") return ModelFamily::Classical;
    if (s == "discrete-classical") return ModelFamily::DiscreteClassical;
    if (s == "fractional") return ModelFamily::Fractional;
    if (s == "discrete-fractional") return ModelFamily::DiscreteFractional;
    throw std::invalid_argument("unknown model family '" + s + "'");
}

ModelSpec model_for(ModelFamily family, double param, double fixed) {
    switch (family) {
    case ModelFamily::Classical: return classical();
    case ModelFamily::DiscreteClassical: return discrete_classical(param);
    case ModelFamily::Fractional: return fractional(param);
    case ModelFamily::DiscreteFractional: return discrete_fractional(param, fixed);
    }
    throw std::invalid_argument("unknown family");
}

DecaySweepReport uniform_decay_sweep(const FamilySweep& sweep, const WeightSpec& w, const EvolveSpec& spec,
                                     double a_target, const DecayOptions& opt) {
    DecaySweepReport out;
    out.a_target = a_target;
    out.sup_rate = -std::numeric_limits<double>::infinity();
    if (sweep.params.empty()) {
        out.pass = true;
        out.warning = "empty parameter list: PASS is vacuous";
        return out;
    }
    if (!sweep.grid_for || !sweep.initial) throw std::invalid_argument("uniform_decay_sweep: grid policy and initial datum required");
    bool all_ok = true;
    for (double p : sweep.params) {
        SweepRow row;
        row.param = p;
        try {
            const ModelSpec model = model_for(sweep.family, p, sweep.fixed);
            row.model = describe(model);
            const Grid1D g = sweep.grid_for(p);
            EvolveSpec es = spec;
            if (es.scheme != TimeScheme::ExactExpm) es.dt = std::min(es.dt, default_dt(model));
            row.report = decay_rate(assemble(model, g), sweep.initial(g), w, es, opt);
            if (row.report.skipped) {
                all_ok = false;
            } else {
                out.sup_rate = std::max(out.sup_rate, row.report.rate);
            }
        } catch (const std::exception& e) {
            row.error = e.what();
            all_ok = false;
        }
        out.rows.push_back(std::move(row));
    }
    out.pass = all_ok && out.sup_rate < a_target;
    return out;
}

} // namespace fplab
