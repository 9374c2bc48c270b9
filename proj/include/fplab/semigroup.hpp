#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fplab/grid.hpp"
#include "fplab/norms.hpp"
#include "fplab/operators.hpp"

namespace fplab {

enum class TimeScheme { BackwardEuler, CrankNicolson, ExactExpm };
std::string to_string(TimeScheme s);
TimeScheme parse_time_scheme(const std::string& s);

struct EvolveSpec {
    double t_end = 1.0;
    double dt = 0.01;  // the step is shrunk so that t_end is hit exactly
    TimeScheme scheme = TimeScheme::BackwardEuler;
    int record_every = 1;
};
// dt = min(0.01, eps^2 / 2) for DiscreteClassical, 0.01 otherwise
double default_dt(const ModelSpec& m);

struct Snapshot {
    double t;
    Field f;
};
using Trajectory = std::vector<Snapshot>;

// Largest n for which ExactExpm is allowed.
constexpr int kExpmMaxSize = 2049;

Trajectory evolve(const OperatorMatrix& op, const Field& f0, const EvolveSpec& spec);

struct SteadyStateInfo {
    double residual_l1 = 0;     // ||Lambda G||_{L1}
    double operator_norm = 0;   // max column L1 norm of the matrix
    double next_modulus = 0;    // smallest |lambda| on the zero-mass subspace (estimate)
    int iterations = 0;
};
// Null vector by shifted inverse iteration, normalized to unit mass.
Field steady_state(const OperatorMatrix& op, SteadyStateInfo* info = nullptr);

// Equilibrium from the model equations in Fourier variables:
//   Ghat(xi) = exp(-int_0^|xi| sigma(s)/s ds), sigma = symbol of the diffusion part.
Field fourier_steady_oracle(const ModelSpec& model, const Grid1D& grid, int pad_factor = 4);
// sigma(s) for each model (s >= 0)
double diffusion_symbol(const ModelSpec& model, double s);

struct DecayOptions {
    double t_lo = -1;            // fit window; <= 0 means t_end / 2
    double t_hi = -1;            // <= 0 means t_end
    double floor_rel = 1e-10;    // norms below 100 x floor_rel x norm(0) end the window
    double max_residual = 0.1;
};

struct DecayReport {
    std::vector<double> times;
    std::vector<double> norms;
    double rate = 0;         // fitted a in norm ~ C e^{a t} |g0|
    double prefactor = 0;    // fitted C
    double fit_lo = 0, fit_hi = 0;
    double residual = 0;     // RMS of log residuals
    int fit_points = 0;
    bool clean = false;      // residual <= max_residual
    bool projected = false;  // f0 had nonzero mass and was projected
    bool skipped = false;    // norms ~ 0: nothing to fit
    std::string weight;
    std::string message;
};

DecayReport decay_rate(const OperatorMatrix& op, const Field& f0, const WeightSpec& w, const EvolveSpec& spec,
                       const DecayOptions& opt = {});
// Least-squares fit of log(norms) over the window; used by decay_rate.
void fit_decay(DecayReport& r, const DecayOptions& opt);

enum class ModelFamily { Classical, DiscreteClassical, Fractional, DiscreteFractional };
std::string to_string(ModelFamily f);
ModelFamily parse_family(const std::string& s);

// One-parameter family: param is eps or alpha; `fixed` is the other
// parameter where the family needs one (alpha for DiscreteFractional).
struct FamilySweep {
    ModelFamily family = ModelFamily::Fractional;
    std::vector<double> params;
    double fixed = 1.0;
    std::function<Grid1D(double)> grid_for;
    std::function<Field(const Grid1D&)> initial;
};
ModelSpec model_for(ModelFamily family, double param, double fixed);

struct SweepRow {
    double param = 0;
    std::string model;
    DecayReport report;
    std::string error;  // non-empty when this parameter failed
};

struct DecaySweepReport {
    std::vector<SweepRow> rows;
    double sup_rate = 0;
    double a_target = 0;
    bool pass = false;
    std::string warning;
};

DecaySweepReport uniform_decay_sweep(const FamilySweep& sweep, const WeightSpec& w, const EvolveSpec& spec,
                                     double a_target, const DecayOptions& opt = {});

} // namespace fplab
