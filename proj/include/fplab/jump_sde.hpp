#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fplab/kernels.hpp"

namespace fplab {

// dX = -X dt - dL, L a pure-jump Levy process.
struct CompoundPoisson {
    Kernel kernel;            // jump density is kernel / ||kernel||_1
    double rate_scale = 1.0;  // total jump rate = rate_scale ||kernel||_1
};
// symmetric stable noise with E e^{i xi L_1} = e^{-|xi|^alpha}; equilibrium e^{-|xi|^alpha/alpha}
struct AlphaStable {
    double alpha = 1.5;
};
using JumpNoise = std::variant<CompoundPoisson, AlphaStable>;

struct JumpOuSpec {
    JumpNoise noise = AlphaStable{};
    double t_end = 1.0;
    int n_paths = 1000;
    std::uint64_t seed = 1;
    double dt_record = 0.1;

    void validate() const;
    double jump_rate() const;  // CompoundPoisson only
    std::string describe() const;
};

struct InitialSampler {
    enum class Kind { Point, Gaussian, Equilibrium } kind = Kind::Point;
    double a = 0.0;  // point / mean
    double b = 1.0;  // standard deviation
    static InitialSampler point(double x) { return {Kind::Point, x, 0.0}; }
    static InitialSampler gaussian(double mean, double sd) { return {Kind::Gaussian, mean, sd}; }
    static InitialSampler equilibrium() { return {Kind::Equilibrium, 0.0, 0.0}; }
};
// "delta:3", "gaussian:0,1", "equilibrium"
InitialSampler parse_initial(const std::string& text);

struct PathEnsemble {
    std::vector<double> times;
    Eigen::MatrixXd states;  // times x paths
    std::uint64_t seed = 0;  // path j uses mix_seed(seed, j)

    Eigen::VectorXd at(std::size_t k) const { return states.row(static_cast<Eigen::Index>(k)).transpose(); }
    void write_csv(const std::string& path) const;  // t, p05, p25, p50, p75, p95
};

// Record times 0, dt_record, 2 dt_record, ..., t_end.
PathEnsemble simulate(const JumpOuSpec& spec, const InitialSampler& init);
// Explicit start values (one per path) and record times (ascending, >= 0).
PathEnsemble simulate_from(const JumpOuSpec& spec, const Eigen::VectorXd& x0, const std::vector<double>& times);
// Long-run samples from the stationary law (burn-in t = 20 from 0, independent seed stream).
Eigen::VectorXd equilibrium_samples(const JumpOuSpec& spec, int n, std::uint64_t seed);

// Standard symmetric alpha-stable draw, Chambers-Mallows-Stuck.
double stable_draw(double alpha, double u_angle, double w_exp);

struct CouplingReport {
    std::vector<double> times;
    std::vector<double> distance;   // max over paths of |X_t - Y_t|
    std::vector<double> predicted;  // e^{-t} |x0 - y0|
    double max_error = 0;
    bool pass = false;
};
CouplingReport coupled_decay(const JumpOuSpec& spec, double x0, double y0, double tol = 1e-12);

// Exact W1 between two empirical measures on R (quantile functions); unequal sizes allowed.
double empirical_w1(std::vector<double> a, std::vector<double> b);
double empirical_w1(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// mean cos(xi X)
double empirical_cf(const Eigen::VectorXd& x, double xi);

struct WassersteinRow {
    double t = 0;
    double w1 = 0;     // W1(f_t, G)
    double bound = 0;  // e^{-t} W1(f_0, G)
    double ratio = 0;  // w1 / W1(f_0, G)
    bool pass = false;
};
struct WassersteinReport {
    double w1_initial = 0;
    double mc_tol = 0;
    std::vector<WassersteinRow> rows;
    bool pass = false;
};
// Reference cloud: equilibrium samples (independent burn-in) driven afterwards by the same noise as the paths.
WassersteinReport wasserstein_contraction_check(const JumpOuSpec& spec, const InitialSampler& f0,
                                                const std::vector<double>& t_grid);

} // namespace fplab
