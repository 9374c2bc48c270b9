#include "fplab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fplab/error.hpp"
#include "fplab/fourier.hpp"
#include "fplab/linalg.hpp"
#include "fplab/norms.hpp"
#include "fplab/quadrature.hpp"

namespace fplab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_smooth(const Kernel& k, const char* what) {
    if (k.family() != Kernel::Family::SmoothSymmetric)
        throw std::invalid_argument(std::string(what) + ": smooth symmetric kernel required");
}

// Symbol of the rescaled kernel on the FFT frequencies, evaluated lazily where
// the spectrum of at least one field is non-negligible.
class SymbolTable {
public:
    SymbolTable(const Kernel& k, double eps, const Eigen::VectorXd& xi)
        : k_(k), eps_(eps), xi_(xi), cache_(xi.size(), std::numeric_limits<double>::quiet_NaN()) {}
    double operator()(Eigen::Index i) {
        if (std::isnan(cache_[i])) cache_[i] = k_.symbol(eps_ * xi_[i]);
        return cache_[i];
    }

private:
    Kernel k_;
    double eps_;
    Eigen::VectorXd xi_;
    std::vector<double> cache_;
};

bool negligible(double power, double peak) { return power <= 1e-32 * peak; }

double lattice_dirichlet(const Field& f, const Kernel& k, double eps) {
    const int n = f.size();
    const double h = f.grid().spacing();
    const Kernel ke = rescale(k, eps);
    const Eigen::VectorXd& v = f.values();
    double s = 0.0;
    for (int o = 1; o < n; ++o) {
        const double w = ke(o * h);
        if (w == 0.0) continue;
        const Eigen::ArrayXd d = v.head(n - o).array() - v.tail(n - o).array();
        s += 2.0 * w * d.square().sum();
    }
    return s * h * h / (2.0 * eps * eps);
}

} // namespace

DirichletForm dirichlet_form(const Field& f, const Kernel& k, double eps) {
    require_smooth(k, "dirichlet_form");
    if (!(eps > 0.0)) throw std::invalid_argument("dirichlet_form: eps must be positive");
    DirichletForm r;
    r.double_sum = lattice_dirichlet(f, k, eps);

    const SpectralField s = fourier_transform(f, 4);
    SymbolTable sym(k, eps, s.xi);
    const double peak = s.values.cwiseAbs2().maxCoeff();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.xi.size(); ++i) {
        const double pw = std::norm(s.values[i]);
        if (negligible(pw, peak)) continue;
        acc += pw * sym(i);
    }
    r.fourier = acc * s.dxi() / (kTwoPi * eps * eps);
    const double scale = std::max(std::abs(r.double_sum), std::abs(r.fourier));
    r.relative_gap = scale > 0.0 ? std::abs(r.double_sum - r.fourier) / scale : 0.0;
    return r;
}

std::vector<GradientCheck> gradient_convolution_check(const std::vector<Field>& fs, const Kernel& k, double eps,
                                                      double K) {
    require_smooth(k, "gradient_convolution_check");
    if (!(eps > 0.0) || !(K > 0.0)) throw std::invalid_argument("gradient_convolution_check: need eps > 0 and K > 0");
    std::vector<GradientCheck> out;
    if (fs.empty()) return out;
    const SpectralField layout = spectral_layout(fs.front().grid(), 4);
    SymbolTable sym(k, eps, layout.xi);
    const double l1 = k.l1_norm();
    for (const Field& f : fs) {
        if (f.grid() != fs.front().grid()) throw std::invalid_argument("gradient_convolution_check: mixed grids");
        const SpectralField s = fourier_transform(f, 4);
        const double peak = s.values.cwiseAbs2().maxCoeff();
        double lhs = 0.0, form = 0.0;
        for (Eigen::Index i = 0; i < s.xi.size() && peak > 0.0; ++i) {
            const double pw = std::norm(s.values[i]);
            if (negligible(pw, peak)) continue;
            const double gap = sym(i);
            const double kh = l1 - gap;
            lhs += s.xi[i] * s.xi[i] * kh * kh * pw;
            form += gap * pw;
        }
        GradientCheck g;
        g.lhs = lhs * s.dxi() / kTwoPi;
        g.rhs = K * form * s.dxi() / (kTwoPi * eps * eps);
        g.pass = g.lhs <= g.rhs * (1.0 + 1e-10);
        out.push_back(g);
    }
    return out;
}

GradientCheck gradient_convolution_check(const Field& f, const Kernel& k, double eps, double K) {
    return gradient_convolution_check(std::vector<Field>{f}, k, eps, K).front();
}

double psi_constant_C(const Grid1D& grid, const Kernel& k, double eps, double M, int p, double q) {
    if (p != 1 && p != 2) throw std::invalid_argument("psi: p must be 1 or 2");
    const double s = p * q;
    double best = -std::numeric_limits<double>::infinity();
    if (eps == 0.0) {
        for (int i = 0; i < grid.size(); ++i) {
            const double x = grid.node(i);
            const double b2 = 1.0 + x * x;
            best = std::max(best, (s / p) * (1.0 + (s - 2.0) * x * x / b2));
        }
        return best;
    }
    require_smooth(k, "psi_constant_C");
    if (M > 1.0 / (eps * eps)) throw std::invalid_argument("psi: the splitting needs M <= 1/eps^2");
    const Kernel ke = rescale(k, eps);
    const double cut = ke.quadrature_cut();
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.node(i);
        const double mp = std::pow(1.0 + x * x, 0.5 * s);
        const double conv = integrate([&](double z) { return ke(z) * std::pow(1.0 + (x - z) * (x - z), 0.5 * s); },
                                      -cut, cut, 128);
        const double theta = (1.0 / p) * (1.0 / (eps * eps) - M) * (conv - ke.l1_norm() * mp) / mp;
        best = std::max(best, (1.0 + x * x) * theta);
    }
    return best;
}

double psi_constant_CR(const Grid1D& grid, const Kernel& k, double eps, double M, double R, int p, double q) {
    if (!(eps > 0.0) || !(M > 0.0)) return 0.0;
    require_smooth(k, "psi_constant_CR");
    const Kernel ke = rescale(k, eps);
    const double cut = ke.quadrature_cut();
    const double s = p * q;
    auto g = [&](double y) { return (1.0 - cutoff(y, R)) * std::pow(1.0 + y * y, 0.5 * s); };
    double best = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double x = grid.node(i);
        const double conv = integrate([&](double z) { return ke(z) * g(x - z); }, -cut, cut, 128);
        const double theta = (M / p) * (conv - ke.l1_norm() * g(x)) / std::pow(1.0 + x * x, 0.5 * s);
        best = std::max(best, theta / (M * eps));
    }
    return best;
}

PsiProfile psi_profile(const Grid1D& grid, double eps, double M, double R, int p, double q, double C_bound,
                       double C_R, double a) {
    if (p != 1 && p != 2) throw std::invalid_argument("psi: p must be 1 or 2");
    if (!(eps >= 0.0) || !(M >= 0.0) || !(R > 0.0) || !(q >= 0.0))
        throw std::invalid_argument("psi: need eps >= 0, M >= 0, R > 0, q >= 0");
    PsiProfile r;
    r.eps = eps;
    r.M = M;
    r.R = R;
    r.p = p;
    r.q = q;
    r.C = C_bound;
    r.C_R = C_R;
    r.a = a;
    const int n = grid.size();
    r.x = grid.nodes();
    r.values.resize(n);
    const double dp = 1.0 - 1.0 / p;  // d / p'
    double rest = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double x = r.x[i];
        const double b2 = 1.0 + x * x;
        const double v = C_bound / b2 + dp - q * x * x / b2 - M * cutoff(x, R);
        rest = std::max(rest, v);
        r.values[i] = v + M * C_R * eps;
    }
    Eigen::Index im;
    r.sup = r.values.maxCoeff(&im);
    r.argsup = r.x[im];
    r.pass = r.sup <= a;
    if (rest > a)
        r.eps0 = 0.0;
    else if (M * C_R > 0.0)
        r.eps0 = (a - rest) / (M * C_R);
    else
        r.eps0 = std::numeric_limits<double>::infinity();
    return r;
}

DissipativityReport dissipativity_check(const OperatorMatrix& B, const WeightSpec& w, double a, int probes,
                                        std::uint64_t seed, const ProbeOptions& opt) {
    w.validate();
    if (w.p == 1 && w.s != 0) throw std::invalid_argument("dissipativity_check: p = 1 supports s = 0 only");
    if (w.s > 1) throw std::invalid_argument("dissipativity_check: s in {0, 1}");
    const Grid1D& g = B.grid;
    const int n = g.size();
    const double h = g.spacing();
    Eigen::VectorXd omega = Eigen::VectorXd::Constant(n, h);
    omega[0] *= 0.5;
    omega[n - 1] *= 0.5;
    const Eigen::VectorXd m = weight_vector(g, w.q);
    const Eigen::VectorXd wm = omega.cwiseProduct(m);
    const Eigen::VectorXd wm2 = omega.cwiseProduct(m.cwiseAbs2());

    DissipativityReport r;
    r.label = B.label;
    r.weight = w.describe();
    r.a = a;
    r.worst_ratio = -std::numeric_limits<double>::infinity();
    for (const Field& f : make_probes(g, probes, seed, opt)) {
        const Eigen::VectorXd& v = f.values();
        const Eigen::VectorXd Bv = B.entries * v;
        double num = 0.0, den = 0.0;
        if (w.p == 1) {
            for (int i = 0; i < n; ++i) {
                const double sg = v[i] > 0.0 ? 1.0 : (v[i] < 0.0 ? -1.0 : 0.0);
                num += wm[i] * sg * Bv[i];
                den += wm[i] * std::abs(v[i]);
            }
        } else {
            num = wm2.dot(v.cwiseProduct(Bv));
            den = wm2.dot(v.cwiseAbs2());
            if (w.s == 1) {
                const Eigen::VectorXd dv = derivative(v, h);
                const Eigen::VectorXd dBv = derivative(Bv, h);
                num += wm2.dot(dv.cwiseProduct(dBv));
                den += wm2.dot(dv.cwiseAbs2());
            }
        }
        if (!(den > 0.0)) {
            ++r.skipped;
            continue;
        }
        ++r.probes;
        r.worst_ratio = std::max(r.worst_ratio, num / den);
    }
    if (r.probes == 0) throw std::invalid_argument("dissipativity_check: every probe was zero");
    if (!std::isfinite(r.worst_ratio)) throw NumericalError("dissipativity_check: non-finite ratio");
    r.pass = r.worst_ratio <= a + 1e-8;
    return r;
}

AdjointReport adjoint_dissipativity_check(const OperatorMatrix& B, double q, double alpha, double b, int probes,
                                          std::uint64_t seed) {
    if (!(q >= 0.0) || !(q < 0.5 * alpha))
        throw std::invalid_argument("adjoint check needs 0 <= q < alpha/2 (weight would underflow the dual)");
    const Grid1D& g = B.grid;
    const Eigen::VectorXd m = weight_vector(g, q);
    // (D_m B D_m^{-1})^T
    const Eigen::MatrixXd Bstar = (m.asDiagonal() * B.entries * m.cwiseInverse().asDiagonal()).transpose();
    AdjointReport r;
    r.b = b;
    r.worst_ratio = -std::numeric_limits<double>::infinity();
    for (const Field& f : make_probes(g, probes, seed)) {
        const Eigen::VectorXd& v = f.values();
        const double den = v.squaredNorm();
        if (!(den > 0.0)) continue;
        ++r.probes;
        r.worst_ratio = std::max(r.worst_ratio, v.dot(Bstar * v) / den);
    }
    r.pass = r.worst_ratio <= b;
    return r;
}

RegularizationReport regularization_norm(const OperatorMatrix& A, const OperatorMatrix& B, int n_conv,
                                         const std::vector<double>& t_grid, const WeightSpec& source,
                                         const WeightSpec& target, int probes, std::uint64_t seed,
                                         const ProbeOptions& opt, double fit_from) {
    if (n_conv < 1) throw std::invalid_argument("regularization_norm: n_conv >= 1");
    if (A.grid != B.grid) throw std::invalid_argument("regularization_norm: A and B live on different grids");
    const Grid1D& g = A.grid;
    const int n = g.size();
    constexpr int kSub = 64;  // trapezoid panels per Duhamel integral
    if (n > 2049) throw std::invalid_argument("regularization_norm: needs n <= 2049 for the exact exponential");
    const double bytes = static_cast<double>(kSub + 1) * n * n * sizeof(double) * (n_conv > 1 ? 2 : 1);
    if (bytes > 1.5e9)
        throw std::invalid_argument("regularization_norm: memory guard (" + std::to_string(bytes / 1e9) +
                                    " GB of propagators); reduce n");

    std::vector<Field> ps = make_probes(g, probes, seed, opt);
    Eigen::MatrixXd F(n, static_cast<int>(ps.size()));
    std::vector<double> den(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        F.col(static_cast<int>(i)) = ps[i].values();
        den[i] = weighted_norm(ps[i], source);
    }
    RegularizationReport rep;
    rep.n_conv = n_conv;
    rep.source = source.describe();
    rep.target = target.describe();

    for (double t : t_grid) {
        if (!(t >= 0.0)) throw std::invalid_argument("regularization_norm: times must be >= 0");
        Eigen::MatrixXd TF;  // T_{n_conv}(t) F
        if (n_conv == 1) {
            TF = A.entries * (expm(t * B.entries) * F);
        } else {
            const double ds = t / kSub;
            const Eigen::MatrixXd P = expm(ds * B.entries);
            std::vector<Eigen::MatrixXd> T1(kSub + 1);  // T_1(k ds) = A e^{k ds B}
            Eigen::MatrixXd Pk = Eigen::MatrixXd::Identity(n, n);
            for (int k = 0; k <= kSub; ++k) {
                T1[k] = A.entries * Pk;
                if (k < kSub) Pk = Pk * P;
            }
            // level j holds T_j(k ds) F for k = 0..kSub
            std::vector<Eigen::MatrixXd> level(kSub + 1);
            for (int k = 0; k <= kSub; ++k) level[k] = T1[k] * F;
            for (int j = 2; j <= n_conv; ++j) {
                std::vector<Eigen::MatrixXd> next(kSub + 1, Eigen::MatrixXd::Zero(n, F.cols()));
                const int kmin = (j == n_conv) ? kSub : 1;
                for (int k = kmin; k <= kSub; ++k)
                    for (int l = 0; l <= k; ++l) {
                        const double wt = (l == 0 || l == k) ? 0.5 : 1.0;
                        next[k].noalias() += (wt * ds) * (T1[k - l] * level[l]);
                    }
                level = std::move(next);
            }
            TF = level[kSub];
        }
        double best = 0.0;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (!(den[i] > 0.0)) continue;
            best = std::max(best, weighted_norm(Eigen::VectorXd(TF.col(static_cast<int>(i))), g, target) / den[i]);
        }
        rep.rows.push_back({t, best});
    }

    std::vector<double> ts, ys;
    for (const auto& row : rep.rows)
        if (row.t >= fit_from && row.norm > 0.0) {
            ts.push_back(row.t);
            ys.push_back(std::log(row.norm));
        }
    if (ts.size() >= 2) {
        const double k = static_cast<double>(ts.size());
        double st = 0, sy = 0, stt = 0, sty = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            st += ts[i];
            sy += ys[i];
            stt += ts[i] * ts[i];
            sty += ts[i] * ys[i];
        }
        rep.rate = (k * sty - st * sy) / (k * stt - st * st);
        const double icpt = (sy - rep.rate * st) / k;
        double ss = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) ss += std::pow(ys[i] - icpt - rep.rate * ts[i], 2);
        rep.residual = std::sqrt(ss / k);
    } else {
        rep.rate = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

double fractional_sobolev_constant(double alpha) {
    return 1.0 / (std::tgamma(1.0 + alpha) * std::sin(0.5 * std::numbers::pi * alpha));
}

SobolevIdentity fractional_sobolev_identity(const Field& u, double alpha) {
    const Grid1D& g = u.grid();
    const int n = g.size();
    const double h = g.spacing();
    const JumpStencil st = jump_stencil(Kernel::singular(alpha, 1.0), g);
    std::vector<double> prefix(n + 1, 0.0);
    for (int o = 1; o < n; ++o) prefix[o + 1] = prefix[o] + st.rate[o];
    const double full = 2.0 * (prefix[n] + st.tail);
    const Eigen::VectorXd& v = u.values();

    SobolevIdentity r;
    r.c0 = fractional_sobolev_constant(alpha);
    double s = 0.0;
    for (int o = 1; o < n; ++o) {
        const Eigen::ArrayXd d = v.head(n - o).array() - v.tail(n - o).array();
        s += 2.0 * st.rate[o] * d.square().sum();
    }
    // pairs with one point off the grid see u = 0 there; (x, y) and (y, x) both count
    for (int i = 0; i < n; ++i) s += 2.0 * (full - prefix[i + 1] - prefix[n - i]) * v[i] * v[i];
    r.double_sum = s * h;

    const SpectralField sf = fourier_transform(u, 4);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < sf.xi.size(); ++i) acc += std::pow(std::abs(sf.xi[i]), alpha) * std::norm(sf.values[i]);
    r.fourier = r.c0 * acc * sf.dxi();
    const double scale = std::max(std::abs(r.double_sum), std::abs(r.fourier));
    r.relative_gap = scale > 0.0 ? std::abs(r.double_sum - r.fourier) / scale : 0.0;
    return r;
}

} // namespace fplab
