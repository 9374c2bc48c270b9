#include "fplab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fplab/error.hpp"

namespace fplab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Off-diagonal jump rates by grid offset: rate[j] is the coefficient of
// f_{i +- j} in row i. `tail` is the one-sided rate the same rule assigns to
// offsets beyond the grid (what the censored diagonal keeps).
struct JumpRates {
    std::vector<double> rate;
    double tail = 0.0;
    std::vector<double> kernel_weights;  // DiscreteClassical only: h k_eps(jh), renormalized, j >= 0
};

JumpRates discrete_classical_rates(const DiscreteClassical& m, const Grid1D& g) {
    const double h = g.spacing();
    if (h > m.eps / 8.0 * (1.0 + 1e-12))
        throw std::invalid_argument("grid spacing h = " + fmt(h) + " does not resolve the kernel at eps = " +
                                    fmt(m.eps) + ": need h <= eps/8 = " + fmt(m.eps / 8.0));
    const Kernel k = rescale(m.kernel, m.eps);
    const int n = g.size();
    JumpRates r;
    r.kernel_weights.assign(n, 0.0);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
        r.kernel_weights[j] = h * k(j * h);
        sum += (j == 0 ? 1.0 : 2.0) * r.kernel_weights[j];
    }
    // the lattice sum must reproduce ||k_eps||_1 exactly
    const double scale = k.l1_norm() / sum;
    for (double& w : r.kernel_weights) w *= scale;
    const double inv_eps2 = 1.0 / (m.eps * m.eps);
    r.rate.assign(n, 0.0);
    for (int j = 1; j < n; ++j) r.rate[j] = inv_eps2 * r.kernel_weights[j];
    return r;
}

// Taylor-corrected rule for kernels with a (near-)singularity at 0:
// |z| <= 2h handled through the second difference with int_0^{2h} z^2 k,
// trapezoid on the grid offsets beyond (half weight at 2h).
JumpRates singular_rates(const Kernel& k, const Grid1D& g) {
    const double h = g.spacing();
    if (h > 0.25) throw std::invalid_argument("grid spacing h = " + fmt(h) + " too coarse for the fractional quadrature: need h <= 0.25");
    const int n = g.size();
    JumpRates r;
    r.rate.assign(n, 0.0);
    r.rate[1] = k.near_moment(2.0 * h) / (h * h);
    if (n > 2) r.rate[2] = 0.5 * h * k(2.0 * h);
    for (int j = 3; j < n; ++j) r.rate[j] = h * k(j * h);
    if (k.family() == Kernel::Family::TruncatedFractional) {
        const long jmax = static_cast<long>(std::floor(k.support_radius() / h));
        for (long j = std::max<long>(n, 3); j <= jmax; ++j) r.tail += h * k(j * h);
    } else {
        // sum_{j >= n} h c (jh)^{-1-a}, approximated by the integral from (n - 1/2) h
        r.tail = k.constant() * std::pow((n - 0.5) * h, -k.alpha()) / k.alpha();
    }
    return r;
}

JumpRates jump_rates(const ModelSpec& model, const Grid1D& g) {
    return std::visit(overloaded{
                          [&](const Classical&) -> JumpRates { return {std::vector<double>(g.size(), 0.0), 0.0, {}}; },
                          [&](const DiscreteClassical& m) { return discrete_classical_rates(m, g); },
                          [&](const Fractional& m) { return singular_rates(Kernel::singular(m.alpha, m.c), g); },
                          [&](const DiscreteFractional& m) {
                              return singular_rates(Kernel::truncated_fractional(m.alpha, m.eps), g);
                          },
                      },
                      model);
}

// Bernoulli function z / (e^z - 1)
double bernoulli(double z) {
    if (std::abs(z) < 1e-8) return 1.0 - 0.5 * z;
    return z / std::expm1(z);
}

// Scharfetter-Gummel flux for f'' + (x f)': exact on the Gaussian equilibrium.
void add_sg_diffusion_drift(Eigen::MatrixXd& M, const Grid1D& g) {
    const double h = g.spacing();
    for (int i = 0; i + 1 < g.size(); ++i) {
        const double v = 0.5 * (g.node(i) + g.node(i + 1));
        const double a = bernoulli(-v * h) / (h * h);
        const double b = bernoulli(v * h) / (h * h);
        M(i, i + 1) += a;
        M(i, i) -= b;
        M(i + 1, i + 1) -= a;
        M(i + 1, i) += b;
    }
}

// Finite-volume (x f)' with flux F = c_i f_i + c_{i+1} f_{i+1} at x_{i+1/2}.
// Central where the nearest-neighbour jump rate keeps off-diagonals >= 0,
// upwind (inflow toward the origin) otherwise. No flux through the ends.
void add_drift(Eigen::MatrixXd& M, const Grid1D& g, double neighbour_rate) {
    const double h = g.spacing();
    for (int i = 0; i + 1 < g.size(); ++i) {
        const double v = 0.5 * (g.node(i) + g.node(i + 1));
        double ci = 0.0, cj = 0.0;
        if (std::abs(v) <= 2.0 * h * neighbour_rate) {
            ci = cj = 0.5 * v;
        } else if (v > 0.0) {
            cj = v;
        } else {
            ci = v;
        }
        M(i, i) += ci / h;
        M(i, i + 1) += cj / h;
        M(i + 1, i) -= ci / h;
        M(i + 1, i + 1) -= cj / h;
    }
}

// trapezoid weights: mass(f) = omega . f
Eigen::RowVectorXd mass_weights(const Grid1D& g) {
    Eigen::RowVectorXd w = Eigen::RowVectorXd::Constant(g.size(), g.spacing());
    w[0] *= 0.5;
    w[g.size() - 1] *= 0.5;
    return w;
}

double column_defect(const Eigen::MatrixXd& M, const Grid1D& g) {
    return (mass_weights(g) * M).cwiseAbs().maxCoeff();
}

} // namespace

JumpStencil jump_stencil(const Kernel& k, const Grid1D& grid) {
    if (k.family() == Kernel::Family::SmoothSymmetric)
        throw std::invalid_argument("jump_stencil: fractional kernels only");
    JumpRates r = singular_rates(k, grid);
    return {std::move(r.rate), r.tail};
}

ModelSpec classical() { return Classical{}; }
ModelSpec discrete_classical(double eps, const Kernel& k) {
    ModelSpec m = DiscreteClassical{eps, k};
    validate(m);
    return m;
}
ModelSpec fractional(double alpha) { return fractional(alpha, c_alpha(alpha)); }
ModelSpec fractional(double alpha, double c) {
    ModelSpec m = Fractional{alpha, c};
    validate(m);
    return m;
}
ModelSpec discrete_fractional(double eps, double alpha) {
    ModelSpec m = DiscreteFractional{eps, alpha};
    validate(m);
    return m;
}

ModelSpec parse_model(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    std::vector<double> v;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        try {
            while (std::getline(ss, item, ',')) {
                std::size_t used = 0;
                v.push_back(std::stod(item, &used));
                if (used != item.size()) throw std::invalid_argument("");
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("model '" + text + "': bad number");
        }
    }
    ModelSpec m;
    if (kind == "classical" && v.empty())
        m = classical();
    else if (kind == "discrete-classical" && v.size() == 1)
        m = discrete_classical(v[0]);
    else if (kind == "fractional" && (v.size() == 1 || v.size() == 2))
        m = v.size() == 1 ? fractional(v[0]) : fractional(v[0], v[1]);
    else if (kind == "discrete-fractional" && v.size() == 2)
        m = discrete_fractional(v[0], v[1]);
    else
        throw std::invalid_argument("model '" + text +
                                    "': expected classical, discrete-classical:EPS, fractional:ALPHA[,C] or "
                                    "discrete-fractional:EPS,ALPHA");
    validate(m);
    return m;
}

void validate(const ModelSpec& model) {
    std::visit(overloaded{
                   [](const Classical&) {},
                   [](const DiscreteClassical& m) {
                       if (!(m.eps > 0.0) || !std::isfinite(m.eps)) throw std::invalid_argument("eps must be positive");
                       if (m.kernel.family() != Kernel::Family::SmoothSymmetric)
                           throw std::invalid_argument("discrete-classical model needs a smooth symmetric kernel");
                   },
                   [](const Fractional& m) {
                       if (!(m.alpha > 0.0 && m.alpha < 2.0)) throw std::invalid_argument("alpha must lie in (0, 2)");
                       if (!(m.c > 0.0)) throw std::invalid_argument("fractional prefactor must be positive");
                   },
                   [](const DiscreteFractional& m) {
                       if (!(m.alpha > 0.0 && m.alpha < 2.0)) throw std::invalid_argument("alpha must lie in (0, 2)");
                       if (!(m.eps > 0.0 && m.eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
                   },
               },
               model);
}

std::string describe(const ModelSpec& model) {
    return std::visit(overloaded{
                          [](const Classical&) { return std::string("classical"); },
                          [](const DiscreteClassical& m) {
                              return "discrete-classical(eps=" + fmt(m.eps) + ",kernel=" + m.kernel.name() + ")";
                          },
                          [](const Fractional& m) { return "fractional(alpha=" + fmt(m.alpha) + ",c=" + fmt(m.c) + ")"; },
                          [](const DiscreteFractional& m) {
                              return "discrete-fractional(eps=" + fmt(m.eps) + ",alpha=" + fmt(m.alpha) + ")";
                          },
                      },
                      model);
}

Kernel jump_kernel(const ModelSpec& model) {
    return std::visit(overloaded{
                          [](const Classical&) -> Kernel { throw std::invalid_argument("classical model has no jump kernel"); },
                          [](const DiscreteClassical& m) { return rescale(m.kernel, m.eps); },
                          [](const Fractional& m) { return Kernel::singular(m.alpha, m.c); },
                          [](const DiscreteFractional& m) { return Kernel::truncated_fractional(m.alpha, m.eps); },
                      },
                      model);
}

std::string to_string(OperatorRole r) {
    switch (r) {
    case OperatorRole::Full: return "full";
    case OperatorRole::PartA: return "A";
    case OperatorRole::PartB: return "B";
    }
    return "?";
}

std::string describe(const SplittingSpec& s) {
    return std::visit(overloaded{
                          [](const ClassicalSplit& c) { return "classical(M=" + fmt(c.M) + ",R=" + fmt(c.R) + ")"; },
                          [](const FractionalSplit& f) {
                              return "fractional(eta=" + fmt(f.eta) + ",L=" + fmt(f.Lcut) + ",R=" + fmt(f.R) + ")";
                          },
                      },
                      s);
}

double cutoff(double x) {
    const double a = std::abs(x);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    const double u = 2.0 - a;
    return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

OperatorMatrix assemble(const ModelSpec& model, const Grid1D& grid) {
    validate(model);
    const int n = grid.size();
    OperatorMatrix op{grid, Eigen::MatrixXd::Zero(n, n), OperatorRole::Full, describe(model)};
    Eigen::MatrixXd& M = op.entries;

    const JumpRates jr = jump_rates(model, grid);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (i != j) M(i, j) = jr.rate[std::abs(i - j)];

    if (std::holds_alternative<Classical>(model))
        add_sg_diffusion_drift(M, grid);
    else
        add_drift(M, grid, jr.rate[1]);

    // Censored diagonal: each column has zero trapezoid-weighted sum, so
    // mass(f) is conserved exactly by the semi-discrete flow.
    const Eigen::RowVectorXd omega = mass_weights(grid);
    for (int j = 0; j < n; ++j) {
        M(j, j) = 0.0;
        M(j, j) = -omega.dot(M.col(j)) / omega[j];
    }
    op.conservation_defect = column_defect(M, grid);

    if (!std::holds_alternative<Classical>(model)) {
        std::vector<double> prefix(n + 1, 0.0);  // prefix[m] = sum_{1 <= o < m} rate[o]
        for (int o = 1; o < n; ++o) prefix[o + 1] = prefix[o] + jr.rate[o];
        const double full = 2.0 * (prefix[n] + jr.tail);
        for (int j = 0; j < n; ++j) {
            const double kept = prefix[j + 1] + prefix[n - j];
            const double rel = full > 0.0 ? (full - kept) / full : 0.0;
            op.renormalization_max = std::max(op.renormalization_max, rel);
            if (std::abs(grid.node(j)) <= 0.5 * grid.half_width())
                op.renormalization_interior = std::max(op.renormalization_interior, rel);
        }
    }
    if (!M.allFinite()) throw NumericalError("assembled operator has non-finite entries");
    return op;
}

std::pair<OperatorMatrix, OperatorMatrix> assemble_splitting(const ModelSpec& model, const Grid1D& grid,
                                                             const SplittingSpec& split) {
    const OperatorMatrix full = assemble(model, grid);
    const int n = grid.size();
    const double h = grid.spacing();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);

    if (const auto* cs = std::get_if<ClassicalSplit>(&split)) {
        if (!(cs->M >= 0.0) || !std::isfinite(cs->M) || !(cs->R > 0.0) || !std::isfinite(cs->R))
            throw std::invalid_argument("classical splitting needs M >= 0 and R > 0");
        if (std::holds_alternative<DiscreteFractional>(model))
            throw std::invalid_argument("classical splitting does not apply to the discrete-fractional model; use the fractional scheme");
        if (const auto* dc = std::get_if<DiscreteClassical>(&model)) {
            const JumpRates jr = discrete_classical_rates(*dc, grid);
            for (int i = 0; i < n; ++i) {
                const double chi = cs->M * cutoff(grid.node(i), cs->R);
                if (chi == 0.0) continue;
                for (int j = 0; j < n; ++j) A(i, j) = chi * jr.kernel_weights[std::abs(i - j)];
            }
        } else {
            for (int i = 0; i < n; ++i) A(i, i) = cs->M * cutoff(grid.node(i), cs->R);
        }
    } else {
        const auto& fs = std::get<FractionalSplit>(split);
        if (!(fs.eta > 0.0) || !(fs.Lcut > fs.eta) || !(fs.R > 0.0))
            throw std::invalid_argument("fractional splitting needs 0 < eta < Lcut and R > 0");
        if (fs.eta < 2.0 * h)
            throw std::invalid_argument("fractional splitting: eta = " + fmt(fs.eta) + " is inside the near-field zone; need eta >= 2h = " + fmt(2.0 * h));
        Kernel k = Kernel::singular(1.0, 1.0);
        if (const auto* fr = std::get_if<Fractional>(&model)) {
            k = Kernel::singular(fr->alpha, fr->c);
        } else if (const auto* df = std::get_if<DiscreteFractional>(&model)) {
            if (fs.eta < df->eps || fs.Lcut > 1.0 / df->eps)
                throw std::invalid_argument("fractional splitting needs eps <= eta and Lcut <= 1/eps");
            k = Kernel::truncated_fractional(df->alpha, df->eps);
        } else {
            throw std::invalid_argument("fractional splitting applies to fractional models only; use the classical scheme");
        }
        const JumpRates jr = singular_rates(k, grid);
        std::vector<double> chi(n);
        for (int i = 0; i < n; ++i) chi[i] = cutoff(grid.node(i), fs.R);
        std::vector<double> band(n, 0.0);  // rate[o] * chi_{eta,L}(o h)
        for (int o = 2; o < n; ++o) {
            const double z = o * h;
            band[o] = jr.rate[o] * (cutoff(z / fs.Lcut) - cutoff(z / fs.eta));
        }
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double b = band[std::abs(i - j)];
                if (b == 0.0) continue;
                A(i, j) = b * (chi[i] + chi[j] - chi[i] * chi[j]);
            }
    }

    OperatorMatrix a{grid, A, OperatorRole::PartA, full.label + " A[" + describe(split) + "]"};
    OperatorMatrix b{grid, full.entries - A, OperatorRole::PartB, full.label + " B[" + describe(split) + "]"};
    a.conservation_defect = column_defect(a.entries, grid);
    b.conservation_defect = column_defect(b.entries, grid);
    return {std::move(a), std::move(b)};
}

Field apply(const OperatorMatrix& m, const Field& f) {
    if (m.grid != f.grid()) throw std::invalid_argument("apply: operator and field live on different grids");
    return Field(m.grid, m.entries * f.values());
}

double operator_distance(const Eigen::MatrixXd& diff, const Grid1D& grid, const WeightSpec& source,
                         const WeightSpec& target, int probes, std::uint64_t seed, const ProbeOptions& opt) {
    source.validate();
    target.validate();
    if (diff.rows() != grid.size() || diff.cols() != grid.size())
        throw std::invalid_argument("operator_distance: matrix does not match grid");
    double best = 0.0;
    for (const Field& f : make_probes(grid, probes, seed, opt)) {
        const double den = weighted_norm(f, source);
        if (!(den > 0.0)) continue;
        best = std::max(best, weighted_norm(diff * f.values(), grid, target) / den);
    }
    return best;
}

double operator_distance(const OperatorMatrix& m1, const OperatorMatrix& m2, const WeightSpec& source,
                         const WeightSpec& target, int probes, std::uint64_t seed, const ProbeOptions& opt) {
    if (m1.grid != m2.grid) throw std::invalid_argument("operator_distance: operators live on different grids");
    return operator_distance(Eigen::MatrixXd(m1.entries - m2.entries), m1.grid, source, target, probes, seed, opt);
}

void dump_matrix(std::ostream& os, const OperatorMatrix& m, bool binary) {
    const int n = m.size();
    os << "# fplab-matrix n=" << n << " L=" << m.grid.half_width() << " role=" << to_string(m.role)
       << " label=" << m.label << " layout=row-major\n";
    if (binary) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double v = m.entries(i, j);
                os.write(reinterpret_cast<const char*>(&v), sizeof v);
            }
        return;
    }
    os.precision(17);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) os << (j ? "," : "") << m.entries(i, j);
        os << '\n';
    }
}

} // namespace fplab
