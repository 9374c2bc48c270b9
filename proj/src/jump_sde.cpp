#include "fplab/jump_sde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fplab/error.hpp"
#include "fplab/probes.hpp"
#include "fplab/quadrature.hpp"

namespace fplab {

namespace {

constexpr double kBurnIn = 20.0;

int worker_count() {
    if (const char* env = std::getenv("FPLAB_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

template <class F>
void parallel_paths(int n, F&& body) {
    const int workers = std::min(worker_count(), std::max(1, n / 256));
    if (workers <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo < hi) pool.emplace_back([&, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

// Quantile table of |J| for the jump density kernel / ||kernel||_1.
class JumpTable {
public:
    explicit JumpTable(const Kernel& k) {
        std::vector<double> z{0.0};
        if (k.family() == Kernel::Family::TruncatedFractional) {
            const double e = k.eps(), top = k.support_radius();
            const int cells = 4096;
            const double r = std::pow(top / e, 1.0 / cells);
            z.push_back(e);
            for (int i = 1; i <= cells; ++i) z.push_back(i == cells ? top : e * std::pow(r, i));
        } else if (k.family() == Kernel::Family::SmoothSymmetric) {
            const double cut = std::isfinite(k.support_radius()) ? k.support_radius() : k.quadrature_cut();
            const int cells = 8192;
            for (int i = 1; i <= cells; ++i) z.push_back(cut * i / cells);
        } else {
            throw std::invalid_argument("compound Poisson noise needs an integrable kernel");
        }
        std::vector<double> cdf(z.size(), 0.0);
        for (std::size_t i = 1; i < z.size(); ++i)
            cdf[i] = cdf[i - 1] + integrate([&](double x) { return k(x); }, z[i - 1], z[i], 1);
        const double total = cdf.back();
        if (!(total > 0.0)) throw NumericalError("jump table: kernel has zero mass");
        for (double& c : cdf) c /= total;
        cdf.back() = 1.0;
        z_ = std::move(z);
        cdf_ = std::move(cdf);
    }
    // invert the piecewise-linear cdf; a cell of the fine table never spans the far tail
    double sample(double u) const {
        const auto it = std::upper_bound(cdf_.begin() + 1, cdf_.end() - 1, u);
        const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
        const double lo = cdf_[i - 1], hi = cdf_[i];
        const double s = hi > lo ? std::clamp((u - lo) / (hi - lo), 0.0, 1.0) : 0.0;
        return z_[i - 1] + s * (z_[i] - z_[i - 1]);
    }

private:
    std::vector<double> z_, cdf_;
};

struct Stepper {
    const JumpOuSpec& spec;
    std::unique_ptr<JumpTable> table;
    double rate = 0.0;
    double alpha = 0.0;

    explicit Stepper(const JumpOuSpec& s) : spec(s) {
        if (const auto* cp = std::get_if<CompoundPoisson>(&s.noise)) {
            rate = s.jump_rate();
            if (rate > 0.0) table = std::make_unique<JumpTable>(cp->kernel);
        } else {
            alpha = std::get<AlphaStable>(s.noise).alpha;
        }
    }

    // Advance one path through the record times; the draws depend only on the
    // path's stream and the times, never on the state (synchronous coupling).
    void run(double x, const std::vector<double>& times, std::mt19937_64& rng, double* out, Eigen::Index stride) const {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::exponential_distribution<double> expo(1.0);
        double t = 0.0;
        if (rate > 0.0) {
            double next = expo(rng) / rate;
            for (std::size_t k = 0; k < times.size(); ++k) {
                while (next <= times[k]) {
                    x *= std::exp(-(next - t));
                    t = next;
                    const double mag = table->sample(unif(rng));
                    x -= unif(rng) < 0.5 ? -mag : mag;
                    next = t + expo(rng) / rate;
                }
                x *= std::exp(-(times[k] - t));
                t = times[k];
                out[k * stride] = x;
            }
        } else if (alpha > 0.0) {
            for (std::size_t k = 0; k < times.size(); ++k) {
                const double dt = times[k] - t;
                if (dt > 0.0) {
                    const double sigma = std::pow(-std::expm1(-alpha * dt) / alpha, 1.0 / alpha);
                    const double v = std::numbers::pi * (unif(rng) - 0.5);
                    double w = expo(rng);
                    if (w <= 0.0) w = std::numeric_limits<double>::min();
                    x = std::exp(-dt) * x - sigma * stable_draw(alpha, v, w);
                    t = times[k];
                }
                out[k * stride] = x;
            }
        } else {
            for (std::size_t k = 0; k < times.size(); ++k) out[k * stride] = x * std::exp(-times[k]);
        }
    }
};

} // namespace

void JumpOuSpec::validate() const {
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be finite and >= 0");
    if (n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
    if (!(dt_record > 0.0)) throw std::invalid_argument("dt_record must be positive");
    if (const auto* cp = std::get_if<CompoundPoisson>(&noise)) {
        if (!(cp->rate_scale >= 0.0)) throw std::invalid_argument("rate_scale must be >= 0");
        if (cp->rate_scale > 0.0 && !std::isfinite(cp->rate_scale * cp->kernel.l1_norm()))
            throw std::invalid_argument("compound Poisson jump rate must be finite");
    } else {
        const double a = std::get<AlphaStable>(noise).alpha;
        if (!(a > 0.0 && a <= 2.0)) throw std::invalid_argument("stable index must be in (0, 2]");
    }
}

double JumpOuSpec::jump_rate() const {
    const auto* cp = std::get_if<CompoundPoisson>(&noise);
    if (!cp) throw std::invalid_argument("jump_rate: compound Poisson noise only");
    return cp->rate_scale == 0.0 ? 0.0 : cp->rate_scale * cp->kernel.l1_norm();
}

std::string JumpOuSpec::describe() const {
    std::ostringstream os;
    os << std::setprecision(6);
    if (const auto* cp = std::get_if<CompoundPoisson>(&noise))
        os << "compound-poisson(" << cp->kernel.name() << ", rate=" << (cp->rate_scale == 0 ? 0.0 : jump_rate()) << ")";
    else
        os << "stable(alpha=" << std::get<AlphaStable>(noise).alpha << ")";
    os << " t_end=" << t_end << " paths=" << n_paths << " seed=" << seed;
    return os.str();
}

InitialSampler parse_initial(const std::string& text) {
    try {
        if (text == "equilibrium") return InitialSampler::equilibrium();
        if (text.rfind("delta:", 0) == 0) return InitialSampler::point(std::stod(text.substr(6)));
        if (text.rfind("gaussian:", 0) == 0) {
            const auto body = text.substr(9);
            const auto comma = body.find(',');
            if (comma == std::string::npos) throw std::invalid_argument("");
            const double sd = std::stod(body.substr(comma + 1));
            if (!(sd > 0.0)) throw std::invalid_argument("");
            return InitialSampler::gaussian(std::stod(body.substr(0, comma)), sd);
        }
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("initial law '" + text + "': expected delta:X, gaussian:MEAN,SD or equilibrium");
}

double stable_draw(double alpha, double v, double w) {
    if (alpha == 1.0) return std::tan(v);
    return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
           std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
}

PathEnsemble simulate_from(const JumpOuSpec& spec, const Eigen::VectorXd& x0, const std::vector<double>& times) {
    spec.validate();
    if (x0.size() != spec.n_paths) throw std::invalid_argument("simulate: one start value per path");
    for (std::size_t k = 0; k < times.size(); ++k)
        if (!(times[k] >= 0.0) || (k > 0 && times[k] < times[k - 1]))
            throw std::invalid_argument("simulate: record times must be ascending and >= 0");
    const Stepper stepper(spec);
    PathEnsemble ens;
    ens.times = times;
    ens.seed = spec.seed;
    ens.states.resize(static_cast<Eigen::Index>(times.size()), spec.n_paths);
    const Eigen::Index stride = ens.states.rows() > 0 ? 1 : 0;
    parallel_paths(spec.n_paths, [&](int lo, int hi) {
        for (int j = lo; j < hi; ++j) {
            std::mt19937_64 rng(mix_seed(spec.seed, static_cast<std::uint64_t>(j)));
            stepper.run(x0[j], times, rng, ens.states.col(j).data(), stride);
        }
    });
    if (!ens.states.allFinite()) throw NumericalError("simulate: non-finite state");
    return ens;
}

Eigen::VectorXd equilibrium_samples(const JumpOuSpec& spec, int n, std::uint64_t seed) {
    JumpOuSpec s = spec;
    s.n_paths = n;
    s.seed = mix_seed(seed, 0x6275726eULL);  // independent of every path stream
    return simulate_from(s, Eigen::VectorXd::Zero(n), {kBurnIn}).at(0);
}

PathEnsemble simulate(const JumpOuSpec& spec, const InitialSampler& init) {
    spec.validate();
    std::vector<double> times;
    const int steps = static_cast<int>(std::ceil(spec.t_end / spec.dt_record - 1e-9));
    for (int k = 0; k <= steps; ++k) times.push_back(std::min(spec.t_end, k * spec.dt_record));
    Eigen::VectorXd x0(spec.n_paths);
    switch (init.kind) {
    case InitialSampler::Kind::Point: x0.setConstant(init.a); break;
    case InitialSampler::Kind::Gaussian: {
        std::mt19937_64 rng(mix_seed(spec.seed, 0x696e6974ULL));
        std::normal_distribution<double> nd(init.a, init.b);
        for (int j = 0; j < spec.n_paths; ++j) x0[j] = nd(rng);
        break;
    }
    case InitialSampler::Kind::Equilibrium: x0 = equilibrium_samples(spec, spec.n_paths, spec.seed); break;
    }
    return simulate_from(spec, x0, times);
}

void PathEnsemble::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << "t,p05,p25,p50,p75,p95\n" << std::setprecision(12);
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::vector<double> v(states.cols());
        for (Eigen::Index j = 0; j < states.cols(); ++j) v[j] = states(static_cast<Eigen::Index>(k), j);
        std::sort(v.begin(), v.end());
        auto pct = [&](double p) { return v[static_cast<std::size_t>(p * (v.size() - 1) + 0.5)]; };
        out << times[k] << ',' << pct(0.05) << ',' << pct(0.25) << ',' << pct(0.5) << ',' << pct(0.75) << ','
            << pct(0.95) << '\n';
    }
}

CouplingReport coupled_decay(const JumpOuSpec& spec, double x0, double y0, double tol) {
    spec.validate();
    std::vector<double> times;
    const int steps = static_cast<int>(std::ceil(spec.t_end / spec.dt_record - 1e-9));
    for (int k = 0; k <= steps; ++k) times.push_back(std::min(spec.t_end, k * spec.dt_record));
    const PathEnsemble X = simulate_from(spec, Eigen::VectorXd::Constant(spec.n_paths, x0), times);
    const PathEnsemble Y = simulate_from(spec, Eigen::VectorXd::Constant(spec.n_paths, y0), times);
    CouplingReport r;
    r.times = times;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double d = (X.at(k) - Y.at(k)).cwiseAbs().maxCoeff();
        const double p = std::exp(-times[k]) * std::abs(x0 - y0);
        r.distance.push_back(d);
        r.predicted.push_back(p);
        r.max_error = std::max(r.max_error, std::abs(d - p));
    }
    r.pass = r.max_error <= tol;
    return r;
}

double empirical_w1(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empirical_w1: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a.size() == b.size()) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
        return s / a.size();
    }
    // integrate |Qa(u) - Qb(u)| over the merged quantile breakpoints
    const double na = a.size(), nb = b.size();
    std::size_t i = 0, j = 0;
    double u = 0.0, s = 0.0;
    while (i < a.size() && j < b.size()) {
        const double ua = (i + 1) / na, ub = (j + 1) / nb;
        const double next = std::min(ua, ub);
        s += (next - u) * std::abs(a[i] - b[j]);
        u = next;
        if (ua <= next) ++i;
        if (ub <= next) ++j;
    }
    return s;
}

double empirical_w1(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return empirical_w1(std::vector<double>(a.data(), a.data() + a.size()),
                        std::vector<double>(b.data(), b.data() + b.size()));
}

double empirical_cf(const Eigen::VectorXd& x, double xi) {
    if (x.size() == 0) throw std::invalid_argument("empirical_cf: empty sample");
    return (xi * x.array()).cos().mean();
}

WassersteinReport wasserstein_contraction_check(const JumpOuSpec& spec, const InitialSampler& f0,
                                                const std::vector<double>& t_grid) {
    spec.validate();
    if (t_grid.empty()) throw std::invalid_argument("wasserstein check: empty time grid");
    std::vector<double> times{0.0};
    for (double t : t_grid) times.push_back(t);
    std::sort(times.begin() + 1, times.end());

    JumpOuSpec s = spec;
    s.t_end = times.back();
    const PathEnsemble X = [&] {
        Eigen::VectorXd x0(s.n_paths);
        if (f0.kind == InitialSampler::Kind::Equilibrium) {
            x0 = equilibrium_samples(s, s.n_paths, mix_seed(s.seed, 1));
        } else {
            JumpOuSpec z = s;
            z.t_end = 0.0;
            x0 = simulate(z, f0).at(0);
        }
        std::sort(x0.data(), x0.data() + x0.size());
        return simulate_from(s, x0, times);
    }();
    // pair the order statistics (the optimal coupling at t = 0), then drive both with the same noise
    Eigen::VectorXd g0 = equilibrium_samples(s, s.n_paths, mix_seed(s.seed, 2));
    std::sort(g0.data(), g0.data() + g0.size());
    const PathEnsemble G = simulate_from(s, g0, times);

    WassersteinReport r;
    r.mc_tol = 4.0 / std::sqrt(static_cast<double>(s.n_paths));
    r.w1_initial = empirical_w1(X.at(0), G.at(0));
    r.pass = true;
    for (std::size_t k = 1; k < times.size(); ++k) {
        WassersteinRow row;
        row.t = times[k];
        row.w1 = empirical_w1(X.at(k), G.at(k));
        row.bound = std::exp(-row.t) * r.w1_initial;
        row.ratio = r.w1_initial > 0.0 ? row.w1 / r.w1_initial : 0.0;
        row.pass = row.w1 <= row.bound * (1.0 + r.mc_tol);
        r.pass = r.pass && row.pass;
        r.rows.push_back(row);
    }
    return r;
}

} // namespace fplab
