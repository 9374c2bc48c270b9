#include "reports.hpp"

#include <cmath>

namespace fplab {

namespace {

// JSON has no inf/nan
json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json nums(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

} // namespace

json complex_json(std::complex<double> z) { return json::array({num(z.real()), num(z.imag())}); }

void to_json(json& j, const SpectrumReport& r) {
    json lead = json::array();
    for (auto z : r.leading) lead.push_back(complex_json(z));
    j = {{"leading", lead},
         {"zero", complex_json(r.zero)},
         {"zero_residual", num(r.zero_residual)},
         {"gap", num(r.gap)},
         {"size", r.eigenvalues.size()}};
}

void to_json(json& j, const DecayReport& r) {
    j = {{"weight", r.weight},     {"rate", num(r.rate)},         {"prefactor", num(r.prefactor)},
         {"fit_lo", num(r.fit_lo)}, {"fit_hi", num(r.fit_hi)},     {"residual", num(r.residual)},
         {"fit_points", r.fit_points}, {"clean", r.clean},         {"projected", r.projected},
         {"skipped", r.skipped},   {"message", r.message},         {"times", nums(r.times)},
         {"norms", nums(r.norms)}};
}

void to_json(json& j, const DecaySweepReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        json x = {{"param", row.param}, {"model", row.model}, {"rate", num(row.report.rate)},
                  {"residual", num(row.report.residual)}, {"clean", row.report.clean}};
        if (!row.error.empty()) x["error"] = row.error;
        rows.push_back(x);
    }
    j = {{"rows", rows}, {"sup_rate", num(r.sup_rate)}, {"a_target", r.a_target}, {"pass", r.pass}};
    if (!r.warning.empty()) j["warning"] = r.warning;
}

void to_json(json& j, const GapSweepReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        json x = {{"param", row.param}, {"gap", num(row.gap)}, {"continuity", num(row.continuity)}};
        if (!row.error.empty()) x["error"] = row.error;
        rows.push_back(x);
    }
    j = {{"rows", rows}, {"max_gap", num(r.max_gap)}, {"gap_target", r.gap_target}, {"pass", r.pass}};
}

void to_json(json& j, const ProjectorReport& r) {
    j = {{"rank", r.rank},
         {"trace", num(r.trace)},
         {"idempotency_defect", num(r.idempotency_defect)},
         {"contour_radius", r.contour_radius},
         {"min_eigen_distance", num(r.min_eigen_distance)},
         {"distance_to_reference", num(r.distance_to_reference)}};
}

void to_json(json& j, const PerturbationReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back({{"z", complex_json(row.z)}, {"norm", num(row.norm)}});
    j = {{"rows", rows}, {"max_norm", num(r.max_norm)}, {"pass", r.pass}};
}

void to_json(json& j, const FourierRatio& r) {
    j = {{"K_star", num(r.K_star)}, {"xi_at_max", r.xi_at_max}, {"min_coercivity", num(r.min_coercivity)},
         {"xi_max", r.xi_max}, {"n_xi", r.n_xi}};
}

void to_json(json& j, const DirichletForm& r) {
    j = {{"double_sum", num(r.double_sum)}, {"fourier", num(r.fourier)}, {"relative_gap", num(r.relative_gap)}};
}

void to_json(json& j, const GradientCheck& r) {
    j = {{"lhs", num(r.lhs)}, {"rhs", num(r.rhs)}, {"pass", r.pass}};
}

void to_json(json& j, const PsiProfile& r) {
    j = {{"sup", num(r.sup)}, {"argsup", r.argsup}, {"eps", r.eps}, {"M", r.M}, {"R", r.R}, {"p", r.p},
         {"q", r.q}, {"C", num(r.C)}, {"C_R", num(r.C_R)}, {"eps0", num(r.eps0)}, {"a", r.a}, {"pass", r.pass}};
}

void to_json(json& j, const DissipativityReport& r) {
    j = {{"label", r.label}, {"weight", r.weight}, {"probes", r.probes}, {"skipped", r.skipped},
         {"worst_ratio", num(r.worst_ratio)}, {"a", r.a}, {"pass", r.pass}};
}

void to_json(json& j, const AdjointReport& r) {
    j = {{"worst_ratio", num(r.worst_ratio)}, {"b", r.b}, {"probes", r.probes}, {"pass", r.pass}};
}

void to_json(json& j, const RegularizationReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back({{"t", row.t}, {"norm", num(row.norm)}});
    j = {{"n_conv", r.n_conv}, {"source", r.source}, {"target", r.target}, {"rows", rows},
         {"rate", num(r.rate)}, {"residual", num(r.residual)}};
}

void to_json(json& j, const SobolevIdentity& r) {
    j = {{"double_sum", num(r.double_sum)}, {"fourier", num(r.fourier)}, {"c0", r.c0},
         {"relative_gap", num(r.relative_gap)}};
}

void to_json(json& j, const CouplingReport& r) {
    j = {{"times", nums(r.times)}, {"distance", nums(r.distance)}, {"predicted", nums(r.predicted)},
         {"max_error", num(r.max_error)}, {"pass", r.pass}};
}

void to_json(json& j, const WassersteinReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"t", row.t}, {"w1", num(row.w1)}, {"bound", num(row.bound)}, {"ratio", num(row.ratio)},
                        {"pass", row.pass}});
    j = {{"w1_initial", num(r.w1_initial)}, {"mc_tol", r.mc_tol}, {"rows", rows}, {"pass", r.pass}};
}

void to_json(json& j, const CriterionResult& r) {
    json m = json::object();
    for (const auto& [k, v] : r.metrics) m[k] = num(v);
    j = {{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"seconds", r.seconds}, {"metrics", m},
         {"notes", r.notes}};
    if (!r.error.empty()) j["error"] = r.error;
}

} // namespace fplab
