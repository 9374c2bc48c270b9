#include "fplab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/LU>

#include "fplab/error.hpp"
#include "fplab/linalg.hpp"
#include "fplab/probes.hpp"

namespace fplab {

int SpectrumReport::separation(double a) const {
    return static_cast<int>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                          [a](const std::complex<double>& z) { return z.real() > a; }));
}

SpectrumReport eigen_spectrum(const Eigen::MatrixXd& M, int k_leading) {
    if (M.rows() > 4097) throw std::invalid_argument("eigen_spectrum: dense solve limited to n <= 4097");
    SpectrumReport r;
    r.eigenvalues = eigenvalues(M);
    const std::size_t n = r.eigenvalues.size();
    std::size_t iz = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(r.eigenvalues[i]) < std::abs(r.eigenvalues[iz])) iz = i;
    r.zero = r.eigenvalues[iz];
    r.zero_residual = std::abs(r.zero);
    r.gap = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (i == iz) continue;
        if (std::abs(r.eigenvalues[i]) < 1e-8)
            throw NumericalError("non-simple zero eigenvalue: two eigenvalues within 1e-8 of 0");
        r.gap = std::max(r.gap, r.eigenvalues[i].real());
    }
    const std::size_t k = std::min<std::size_t>(std::max(k_leading, 0), n);
    r.leading.assign(r.eigenvalues.begin(), r.eigenvalues.begin() + static_cast<long>(k));
    return r;
}

SpectrumReport eigen_spectrum(const OperatorMatrix& op, int k_leading) { return eigen_spectrum(op.entries, k_leading); }

FourierSideGrid default_fourier_side_grid(double alpha, double c, double bias) {
    const double kappa = fractional_symbol_constant(alpha, c);
    FourierSideGrid g;
    g.dxi0 = std::min(1e-2, std::pow(bias / kappa, 1.0 / alpha));
    // Ghat = exp(-kappa xi^alpha / alpha) is below 1e-30 here
    g.xi_max = std::max(10.0, std::pow(70.0 * alpha / kappa, 1.0 / alpha));
    return g;
}

FourierSideOperator assemble_fourier_side(double alpha, double c, const FourierSideGrid& grid) {
    if (!(grid.dxi0 > 0.0) || !(grid.ratio > 1.0) || !(grid.xi_max > grid.dxi0))
        throw std::invalid_argument("fourier-side grid needs dxi0 > 0, ratio > 1, xi_max > dxi0");
    FourierSideOperator op;
    op.alpha = alpha;
    op.c = c;
    op.kappa = fractional_symbol_constant(alpha, c);

    // uniform until the geometric spacing xi (ratio - 1) catches up with dxi0
    std::vector<double> pos;
    const int n_uniform = std::max(1, static_cast<int>(std::ceil(1.0 / (grid.ratio - 1.0))));
    for (int i = 1; i <= n_uniform; ++i) pos.push_back(i * grid.dxi0);
    while (pos.back() < grid.xi_max) pos.push_back(pos.back() * grid.ratio);

    const int m = static_cast<int>(pos.size());
    const int n = 2 * m + 1;
    op.xi.resize(n);
    for (int i = 0; i < m; ++i) {
        op.xi[m + 1 + i] = pos[i];
        op.xi[m - 1 - i] = -pos[i];
    }
    op.xi[m] = 0.0;
    op.entries = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double x = op.xi[i];
        if (x == 0.0) continue;  // the row at xi = 0 is identically zero: mass is conserved
        op.entries(i, i) -= op.kappa * std::pow(std::abs(x), alpha);
        const int up = x > 0.0 ? i - 1 : i + 1;  // neighbour toward the origin
        const double w = std::abs(x) / std::abs(x - op.xi[up]);
        op.entries(i, i) -= w;
        op.entries(i, up) += w;
    }
    return op;
}

FourierSideOperator assemble_fourier_side(double alpha, double c) {
    return assemble_fourier_side(alpha, c, default_fourier_side_grid(alpha, c));
}

DecayReport fourier_side_decay(const FourierSideOperator& op, const std::function<double(double)>& ghat0, double t_end,
                               double dt, const DecayOptions& opt) {
    const int n = op.size();
    Eigen::VectorXd v(n), wq = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) v[i] = ghat0(op.xi[i]);
    for (int i = 0; i + 1 < n; ++i) {
        const double d = op.xi[i + 1] - op.xi[i];
        wq[i] += 0.5 * d;
        wq[i + 1] += 0.5 * d;
    }
    auto norm = [&](const Eigen::VectorXd& u) { return std::sqrt(wq.dot(u.cwiseAbs2())); };
    DecayReport r;
    r.weight = "L^2(dxi)";
    const long steps = std::max<long>(1, std::lround(t_end / dt));
    const Eigen::MatrixXd P = expm((t_end / steps) * op.entries);
    r.times.push_back(0.0);
    r.norms.push_back(norm(v));
    for (long k = 1; k <= steps; ++k) {
        v = P * v;
        r.times.push_back(k * t_end / steps);
        r.norms.push_back(norm(v));
    }
    fit_decay(r, opt);
    return r;
}

GapSweepReport gap_sweep(const std::vector<double>& params, const std::function<Eigen::MatrixXd(double)>& assemble_fn,
                         double gap_target, double reference_gap) {
    GapSweepReport out;
    out.gap_target = gap_target;
    out.max_gap = -std::numeric_limits<double>::infinity();
    bool ok = true;
    for (double p : params) {
        GapRow row;
        row.param = p;
        try {
            row.gap = eigen_spectrum(assemble_fn(p), 0).gap;
            row.continuity = std::isnan(reference_gap) ? std::numeric_limits<double>::quiet_NaN()
                                                       : std::abs(row.gap - reference_gap);
            out.max_gap = std::max(out.max_gap, row.gap);
        } catch (const std::exception& e) {
            row.error = e.what();
            ok = false;
        }
        out.rows.push_back(row);
    }
    out.pass = ok && !params.empty() && out.max_gap <= gap_target && gap_target < 0.0;
    return out;
}

ProjectorReport spectral_projector(const OperatorMatrix& op, double radius, int n_contour, int probes,
                                   std::uint64_t seed) {
    if (!(radius > 0.0)) throw std::invalid_argument("contour radius must be positive");
    if (n_contour < 4 || n_contour % 2) throw std::invalid_argument("n_contour must be even and >= 4");
    const int n = op.size();
    const std::vector<std::complex<double>> ev = eigenvalues(op.entries);

    ProjectorReport r;
    r.contour_radius = radius;
    r.min_eigen_distance = std::numeric_limits<double>::infinity();
    for (const auto& z : ev) r.min_eigen_distance = std::min(r.min_eigen_distance, std::abs(std::abs(z) - radius));
    if (r.min_eigen_distance < 1e-6) {
        std::vector<double> mods;
        for (const auto& z : ev) mods.push_back(std::abs(z));
        std::sort(mods.begin(), mods.end());
        mods.erase(std::unique(mods.begin(), mods.end(), [](double a, double b) { return std::abs(a - b) < 1e-6; }),
                   mods.end());
        double suggest = 0.5 * mods.front();
        for (std::size_t i = 0; i + 1 < mods.size(); ++i)
            if (mods[i + 1] > radius) {
                suggest = 0.5 * (mods[i] + mods[i + 1]);
                break;
            }
        throw std::invalid_argument("contour |z| = " + std::to_string(radius) +
                                    " passes through the spectrum; try radius " + std::to_string(suggest));
    }

    // (1/2 pi i) oint (z - M)^{-1} dz with nodes at angles 2 pi (k + 1/2) / N,
    // which come in conjugate pairs: sum over the upper half and take 2 Re.
    const Eigen::MatrixXcd Mc = op.entries.cast<std::complex<double>>();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n_contour / 2; ++k) {
        const double th = 2.0 * std::numbers::pi * (k + 0.5) / n_contour;
        const std::complex<double> z = std::polar(radius, th);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(z * I - Mc);
        acc += z * lu.inverse();
    }
    r.matrix = (2.0 / n_contour) * acc.real();
    if (!r.matrix.allFinite()) throw NumericalError("spectral projector: non-finite contour sum");
    r.trace = r.matrix.trace();
    r.rank = static_cast<int>(std::lround(r.trace));

    double worst = 0.0;
    for (const Field& f : make_probes(op.grid, probes, seed)) {
        const Eigen::VectorXd Pf = r.matrix * f.values();
        const double den = f.values().norm();
        if (den > 0.0) worst = std::max(worst, (r.matrix * Pf - Pf).norm() / den);
    }
    r.idempotency_defect = worst;
    return r;
}

double projector_distance(const ProjectorReport& p1, const ProjectorReport& p2, const Grid1D& grid,
                          const WeightSpec& w, int probes, std::uint64_t seed) {
    return operator_distance(Eigen::MatrixXd(p1.matrix - p2.matrix), grid, w, w, probes, seed);
}

PerturbationReport perturbation_certificate(const ModelSpec& model_eps, const ModelSpec& model_0, const Grid1D& grid,
                                            const SplittingSpec& split, const std::vector<std::complex<double>>& z_samples,
                                            const WeightSpec& w, int probes, std::uint64_t seed) {
    w.validate();
    if (w.s != 0) throw std::invalid_argument("perturbation_certificate: use a Lebesgue weight (s = 0)");
    const OperatorMatrix L0 = assemble(model_0, grid);
    const OperatorMatrix Le = assemble(model_eps, grid);
    const auto [A, B] = assemble_splitting(model_eps, grid, split);
    const int n = grid.size();
    const Eigen::MatrixXd D = Le.entries - L0.entries;

    std::vector<Field> ps = make_probes(grid, probes, seed);
    Eigen::MatrixXd F(n, static_cast<int>(ps.size()));
    std::vector<double> den(ps.size());
    for (std::size_t p = 0; p < ps.size(); ++p) {
        F.col(static_cast<int>(p)) = ps[p].values();
        den[p] = weighted_norm(ps[p], w);
    }

    PerturbationReport out;
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    auto factor = [&](const Eigen::MatrixXd& X, std::complex<double> z, const char* what) {
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(X.cast<std::complex<double>>() - z * I);
        const double rc = lu.rcond();
        if (!(rc > 1e-12))
            throw NumericalError(std::string("singular resolvent of ") + what + " at z = (" + std::to_string(z.real()) +
                                 ", " + std::to_string(z.imag()) + ")");
        return lu;
    };
    for (const auto& z : z_samples) {
        CertificateRow row{z, 0.0};
        if (D.cwiseAbs().maxCoeff() > 0.0) {
            auto luB = factor(B.entries, z, "B_eps");
            auto lu0 = factor(L0.entries, z, "Lambda_0");
            Eigen::MatrixXcd Y = luB.solve(F.cast<std::complex<double>>());
            Y = A.entries.cast<std::complex<double>>() * Y;
            Y = lu0.solve(Y);
            Y = -(D.cast<std::complex<double>>() * Y);
            for (std::size_t p = 0; p < ps.size(); ++p) {
                if (!(den[p] > 0.0)) continue;
                const Eigen::VectorXd mod = Y.col(static_cast<int>(p)).cwiseAbs();
                row.norm = std::max(row.norm, weighted_norm(mod, grid, w) / den[p]);
            }
        }
        out.max_norm = std::max(out.max_norm, row.norm);
        out.rows.push_back(row);
    }
    out.pass = !out.rows.empty() && out.max_norm < 1.0;
    return out;
}

} // namespace fplab
