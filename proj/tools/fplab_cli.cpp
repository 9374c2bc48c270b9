// fplab: command-line front end. Every subcommand writes <out>/<command>.json,
// the fully resolved config (<out>/<command>_config.json) and a metadata file
// with the non-deterministic bits (timestamps, host, workers).

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fplab/acceptance.hpp"
#include "fplab/error.hpp"
#include "fplab/fourier.hpp"
#include "fplab/grid.hpp"
#include "fplab/inequalities.hpp"
#include "fplab/jump_sde.hpp"
#include "fplab/kernels.hpp"
#include "fplab/norms.hpp"
#include "fplab/operators.hpp"
#include "fplab/semigroup.hpp"
#include "fplab/spectra.hpp"
#include "reports.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fplab;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kNumerical = 3 };

// Every key a config file may set, with its default. Unknown keys are rejected.
json defaults() {
    return {
        {"model", "classical"},
        {"n", 513},
        {"L", 12.0},
        {"seed", 1},
        {"out", "fplab_out"},
        {"fourier_side", false},
        {"k_leading", 8},
        {"family", "fractional"},
        {"params", json::array()},
        {"side", "fourier"},
        {"target", -0.85},
        {"init", "gaussian:1,1"},
        {"weight", "1,0"},
        {"target_weight", "2,0"},
        {"t_end", 8.0},
        {"dt", 0.1},
        {"scheme", "expm"},
        {"eps_list", json::array()},
        {"alpha", 1.0},
        {"check", "dissipativity"},
        {"eps", 0.1},
        {"M", 10.0},
        {"R", 6.0},
        {"eta", 0.1},
        {"lcut", 20.0},
        {"split", "classical"},
        {"a", -0.5},
        {"b", 0.0},
        {"K", 0.0},
        {"p", 1},
        {"q", 1.0},
        {"probes", 32},
        {"tol", 1e-8},
        {"noise", "stable:1.5"},
        {"x0", 1.0},
        {"y0", 0.0},
        {"t", 1.0},
        {"paths", 1000},
        {"dt_record", 0.1},
        {"t_grid", json::array({0.5, 1.0, 2.0})},
        {"n_conv", 2},
        {"criteria", json::array()},
    };
}

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

json parse_value(const std::string& key, const json& like, const std::string& text) {
    try {
        if (like.is_boolean()) {
            if (text == "true" || text == "1") return true;
            if (text == "false" || text == "0") return false;
            throw std::invalid_argument("");
        }
        if (like.is_number_integer()) {
            std::size_t used = 0;
            const long long v = std::stoll(text, &used);
            if (used != text.size()) throw std::invalid_argument("");
            return v;
        }
        if (like.is_number()) {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument("");
            return v;
        }
        if (like.is_array()) {
            json a = json::array();
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) a.push_back(std::stod(item));
            return a;
        }
    } catch (const std::exception&) {
        throw UsageError("--" + key + ": cannot parse '" + text + "'");
    }
    return text;
}

// File values override defaults; the caller then applies explicit flags.
json load_config(const std::string& path, const json& overrides) {
    json cfg = defaults();
    cfg.update(overrides);
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config " + path);
    json file;
    try {
        in >> file;
    } catch (const json::exception& e) {
        throw UsageError("config " + path + ": " + e.what());
    }
    if (!file.is_object()) throw UsageError("config " + path + ": expected a JSON object");
    for (auto it = file.begin(); it != file.end(); ++it) {
        if (!cfg.contains(it.key())) throw UsageError("config " + path + ": unknown key '" + it.key() + "'");
        const json& like = cfg[it.key()];
        const json& v = it.value();
        const bool ok = (like.is_number() && v.is_number()) || (like.is_boolean() && v.is_boolean()) ||
                        (like.is_string() && v.is_string()) || (like.is_array() && v.is_array());
        if (!ok || (like.is_number_integer() && !v.is_number_integer()))
            throw UsageError("config " + path + ": key '" + it.key() + "' has the wrong type");
        cfg[it.key()] = v;
    }
    return cfg;
}

struct Command {
    std::string name;
    CLI::App* app = nullptr;
    std::string config_path;
    std::map<std::string, std::string> flags;  // raw text of each flag
    std::vector<std::string> keys;
    json overrides = json::object();  // command-specific defaults
};

void add_keys(Command& c, const std::vector<const char*>& keys) {
    const json d = defaults();
    for (const char* k : keys) {
        c.keys.push_back(k);
        std::string flag = k;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (d[k].is_boolean()) {
            c.app->add_flag_function("--" + flag, [&c, key = std::string(k)](std::int64_t) { c.flags[key] = "true"; },
                                     std::string("set ") + k);
        } else {
            c.app->add_option_function<std::string>("--" + flag, [&c, key = std::string(k)](const std::string& v) {
                c.flags[key] = v;
            }, "default: " + d[k].dump());
        }
    }
    c.app->add_option("--config", c.config_path, "JSON config file (flags override it)");
}

json resolve(const Command& c) {
    json cfg = load_config(c.config_path, c.overrides);
    for (const auto& [k, v] : c.flags) cfg[k] = parse_value(k, cfg[k], v);
    return cfg;
}

// best effort: <out>/<command>_error.json next to the reports
void failure_record(const Command& c, const json& cfg, const json& record) {
    try {
        const std::string out = cfg.contains("out") ? cfg["out"].get<std::string>() : defaults()["out"].get<std::string>();
        fs::create_directories(out);
        std::ofstream(fs::path(out) / (c.name + "_error.json")) << std::setw(2) << record << '\n';
    } catch (...) {
    }
    std::cerr << record.dump() << '\n';
}

int workers() {
    if (const char* e = std::getenv("FPLAB_WORKERS")) return std::max(1, std::atoi(e));
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

fs::path prepare_out(const json& cfg) {
    fs::path out = cfg["out"].get<std::string>();
    fs::create_directories(out);
    return out;
}

void write_json(const fs::path& p, const json& j) {
    std::ofstream os(p);
    if (!os) throw UsageError("cannot write " + p.string());
    os << std::setw(2) << j << '\n';
}

// reports are byte-stable; the timestamp lives in <command>_metadata.json
void persist(const std::string& command, const json& cfg, const json& report, double seconds) {
    const fs::path out = prepare_out(cfg);
    json resolved = cfg;
    resolved["command"] = command;
    write_json(out / (command + "_config.json"), resolved);
    write_json(out / (command + ".json"), report);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    write_json(out / (command + "_metadata.json"),
               {{"command", command}, {"finished_utc", ts.str()}, {"wall_seconds", seconds}, {"workers", workers()},
                {"version", "0.1.0"}});
}

Grid1D grid_of(const json& cfg) { return make_grid(cfg["L"].get<double>(), cfg["n"].get<int>()); }

std::vector<double> numbers(const json& a) { return a.get<std::vector<double>>(); }

TimeScheme scheme_of(const json& cfg) {
    const std::string s = cfg["scheme"];
    if (s == "expm") return TimeScheme::ExactExpm;
    return parse_time_scheme(s);
}

Field initial_field(const std::string& spec, const Grid1D& g) {
    if (spec.rfind("gaussian:", 0) == 0) {
        const auto body = spec.substr(9);
        const auto comma = body.find(',');
        if (comma == std::string::npos) throw UsageError("--init gaussian:MEAN,SD");
        const double m = std::stod(body.substr(0, comma)), s = std::stod(body.substr(comma + 1));
        return Field::sample(g, [&](double x) { return gaussian_density(x, m, s); });
    }
    if (spec.rfind("csv:", 0) == 0) {
        Field f = read_csv(spec.substr(4));
        if (f.grid() != g) throw UsageError("--init csv: file grid differs from --n/--L");
        return f;
    }
    throw UsageError("--init: expected gaussian:MEAN,SD or csv:PATH");
}

SplittingSpec split_of(const json& cfg) {
    const std::string s = cfg["split"];
    if (s == "classical") return ClassicalSplit{cfg["M"], cfg["R"]};
    if (s == "fractional") return FractionalSplit{cfg["eta"], cfg["lcut"], cfg["R"]};
    throw UsageError("--split: classical or fractional");
}

JumpNoise noise_of(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
        if (kind == "stable") return AlphaStable{std::stod(rest)};
        // k_eps of the Gaussian reference kernel at rate eps^-2
        if (kind == "poisson") {
            const double e = std::stod(rest);
            return CompoundPoisson{rescale(gaussian_reference_kernel(), e), 1.0 / (e * e)};
        }
        // truncated fractional kernel eps,alpha at unit rate scale
        if (kind == "truncated") {
            const auto comma = rest.find(',');
            return CompoundPoisson{truncated_fractional_kernel(std::stod(rest.substr(comma + 1)),
                                                               std::stod(rest.substr(0, comma))),
                                   1.0};
        }
    } catch (const std::invalid_argument&) {
    } catch (const std::out_of_range&) {
    }
    throw UsageError("--noise: stable:ALPHA, poisson:EPS or truncated:EPS,ALPHA");
}

// ---- subcommands -------------------------------------------------------------

int cmd_steady(const json& cfg, json& rep) {
    const ModelSpec m = parse_model(cfg["model"]);
    const Grid1D g = grid_of(cfg);
    const OperatorMatrix op = assemble(m, g);
    SteadyStateInfo info;
    const Field G = steady_state(op, &info);
    const Field oracle = fourier_steady_oracle(m, g);
    const double d = l1_distance(G, oracle);
    write_csv((prepare_out(cfg) / "steady.csv").string(), G);
    rep = {{"model", describe(m)},
           {"l1_to_fourier_oracle", d},
           {"residual_l1", info.residual_l1},
           {"mass", mass(G)},
           {"min_value", G.values().minCoeff()},
           {"conservation_defect", op.conservation_defect},
           {"tol", cfg["tol"]},
           {"pass", d <= cfg["tol"].get<double>()}};
    return rep["pass"] ? kPass : kFail;
}

int cmd_spectrum(const json& cfg, json& rep) {
    const ModelSpec m = parse_model(cfg["model"]);
    SpectrumReport sp;
    if (cfg["fourier_side"]) {
        const auto* fr = std::get_if<Fractional>(&m);
        if (!fr) throw UsageError("--fourier-side needs a fractional:ALPHA[,C] model");
        sp = eigen_spectrum(assemble_fourier_side(fr->alpha, fr->c).entries, cfg["k_leading"]);
    } else {
        sp = eigen_spectrum(assemble(m, grid_of(cfg)), cfg["k_leading"]);
    }
    std::ofstream csv(prepare_out(cfg) / "eigenvalues.csv");
    csv << "re,im\n" << std::setprecision(17);
    for (auto z : sp.eigenvalues) csv << z.real() << ',' << z.imag() << '\n';
    rep = sp;
    rep["model"] = describe(m);
    return kPass;
}

int cmd_gap_sweep(const json& cfg, json& rep) {
    const ModelFamily fam = parse_family(cfg["family"]);
    const auto params = numbers(cfg["params"]);
    if (params.empty()) throw UsageError("--params: at least one value");
    const bool fourier = fam == ModelFamily::Fractional && cfg["side"] == "fourier";
    const double fixed = cfg["alpha"];
    const json c = cfg;
    const GapSweepReport r = gap_sweep(params, [&](double p) -> Eigen::MatrixXd {
        if (fourier) return assemble_fourier_side(p, c_alpha(p)).entries;
        const ModelSpec m = model_for(fam, p, fixed);
        Grid1D g = grid_of(c);
        if (fam == ModelFamily::DiscreteClassical) g = grid_with_spacing(c["L"].get<double>(), p / 8.0);
        return assemble(m, g).entries;
    }, cfg["target"]);
    rep = r;
    rep["family"] = to_string(fam);
    rep["side"] = fourier ? "fourier" : "physical";
    return r.pass ? kPass : kFail;
}

int cmd_decay(const json& cfg, json& rep) {
    const ModelSpec m = parse_model(cfg["model"]);
    const Grid1D g = grid_of(cfg);
    const OperatorMatrix op = assemble(m, g);
    const WeightSpec w = WeightSpec::parse(cfg["weight"]);
    const EvolveSpec es{cfg["t_end"], cfg["dt"], scheme_of(cfg), 1};
    const DecayReport r = decay_rate(op, initial_field(cfg["init"], g), w, es);
    rep = r;
    rep["model"] = describe(m);
    rep["a"] = cfg["a"];
    rep["pass"] = !r.skipped && r.rate <= cfg["a"].get<double>();
    return rep["pass"] ? kPass : kFail;
}

int cmd_converge(const json& cfg, json& rep) {
    const ModelFamily fam = parse_family(cfg["family"]);
    auto eps = numbers(cfg["eps_list"]);
    if (eps.size() < 2) throw UsageError("--eps-list: at least two values");
    std::sort(eps.rbegin(), eps.rend());
    const Grid1D g = fam == ModelFamily::DiscreteClassical ? grid_with_spacing(cfg["L"].get<double>(), eps.back() / 8.0)
                                                           : grid_of(cfg);
    json rows = json::array();
    std::vector<double> dist;
    if (fam == ModelFamily::DiscreteClassical) {
        const OperatorMatrix L0 = assemble(classical(), g);
        for (double e : eps) {
            dist.push_back(operator_distance(assemble(discrete_classical(e), g), L0, {2, 1.0, 3}, {2, 1.0, 0},
                                             cfg["probes"], cfg["seed"]));
            rows.push_back({{"eps", e}, {"distance_H3_to_L2", dist.back()}});
        }
    } else if (fam == ModelFamily::DiscreteFractional) {
        const double alpha = cfg["alpha"];
        const OperatorMatrix L0 = assemble(fractional_limit(alpha), g);
        const ProjectorReport P0 = spectral_projector(L0, 0.5);
        for (double e : eps) {
            const OperatorMatrix Le = assemble(discrete_fractional(e, alpha), g);
            dist.push_back(operator_distance(Le, L0, {2, 1.0, 2}, {2, 1.0, 0}, cfg["probes"], cfg["seed"]));
            const ProjectorReport Pe = spectral_projector(Le, 0.5);
            rows.push_back({{"eps", e},
                            {"distance_H2_to_L2", dist.back()},
                            {"projector_rank", Pe.rank},
                            {"projector_distance", projector_distance(Pe, P0, g, {1, 0.5, 0}, cfg["probes"], cfg["seed"])}});
        }
    } else {
        throw UsageError("--family: discrete-classical or discrete-fractional");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double lx = std::log(eps[i]), ly = std::log(dist[i]);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    const double k = static_cast<double>(eps.size());
    bool decreasing = true;
    for (std::size_t i = 1; i < dist.size(); ++i) decreasing = decreasing && dist[i] < dist[i - 1];
    rep = {{"family", to_string(fam)}, {"rows", rows}, {"slope", (k * sxy - sx * sy) / (k * sxx - sx * sx)},
           {"decreasing", decreasing}, {"pass", decreasing}};
    return decreasing ? kPass : kFail;
}

int cmd_verify(const json& cfg, json& rep) {
    const std::string check = cfg["check"];
    const Grid1D g = grid_of(cfg);
    const int probes = cfg["probes"];
    const std::uint64_t seed = cfg["seed"];
    bool pass = false;
    if (check == "dissipativity") {
        const auto [A, B] = assemble_splitting(parse_model(cfg["model"]), g, split_of(cfg));
        const DissipativityReport r = dissipativity_check(B, WeightSpec::parse(cfg["weight"]), cfg["a"], probes, seed);
        rep = r;
        pass = r.pass;
    } else if (check == "psi") {
        const Kernel k = gaussian_reference_kernel();
        const double eps = cfg["eps"], M = cfg["M"], R = cfg["R"], q = cfg["q"];
        const int p = cfg["p"];
        const PsiProfile r = psi_profile(g, eps, M, R, p, q, psi_constant_C(g, k, eps, M, p, q),
                                         psi_constant_CR(g, k, eps, M, R, p, q), cfg["a"]);
        std::ofstream csv(prepare_out(cfg) / "psi.csv");
        csv << "x,psi\n" << std::setprecision(12);
        for (Eigen::Index i = 0; i < r.x.size(); ++i) csv << r.x[i] << ',' << r.values[i] << '\n';
        rep = r;
        pass = r.pass;
    } else if (check == "dirichlet") {
        json rows = json::array();
        double worst = 0.0;
        for (const Field& f : make_probes(g, probes, seed)) {
            const DirichletForm d = dirichlet_form(f, gaussian_reference_kernel(), cfg["eps"]);
            worst = std::max(worst, d.relative_gap);
            rows.push_back(d);
        }
        rep = {{"rows", rows}, {"worst_relative_gap", worst}, {"tol", cfg["tol"]}};
        pass = worst <= cfg["tol"].get<double>();
    } else if (check == "gradient-bound") {
        const Kernel k = gaussian_reference_kernel();
        const FourierRatio fr = fourier_ratio_constant(k);
        const double K = cfg["K"].get<double>() > 0.0 ? cfg["K"].get<double>() : fr.K_star;
        int failures = 0;
        for (const auto& c : gradient_convolution_check(make_probes(g, probes, seed), k, cfg["eps"], K))
            failures += !c.pass;
        rep = {{"fourier_ratio", fr}, {"K", K}, {"probes", probes}, {"failures", failures}};
        pass = failures == 0;
    } else if (check == "adjoint") {
        const ModelSpec m = parse_model(cfg["model"]);
        const auto [A, B] = assemble_splitting(m, g, split_of(cfg));
        const double alpha = std::holds_alternative<Fractional>(m)            ? std::get<Fractional>(m).alpha
                             : std::holds_alternative<DiscreteFractional>(m) ? std::get<DiscreteFractional>(m).alpha
                                                                              : 2.0;
        const AdjointReport r = adjoint_dissipativity_check(B, cfg["q"], alpha, cfg["b"], probes, seed);
        rep = r;
        pass = r.pass;
    } else if (check == "regularization") {
        const auto [A, B] = assemble_splitting(parse_model(cfg["model"]), g, split_of(cfg));
        const RegularizationReport r = regularization_norm(A, B, cfg["n_conv"], numbers(cfg["t_grid"]),
                                                           WeightSpec::parse(cfg["weight"]),
                                                           WeightSpec::parse(cfg["target_weight"]), probes, seed);
        rep = r;
        rep["a"] = cfg["a"];
        pass = std::isfinite(r.rate) && r.rate <= cfg["a"].get<double>();
    } else if (check == "sobolev-id") {
        json rows = json::array();
        double worst = 0.0;
        for (const Field& f : make_probes(g, probes, seed)) {
            const SobolevIdentity s = fractional_sobolev_identity(f, cfg["alpha"]);
            worst = std::max(worst, s.relative_gap);
            rows.push_back(s);
        }
        rep = {{"rows", rows}, {"worst_relative_gap", worst}, {"tol", cfg["tol"]}};
        pass = worst <= cfg["tol"].get<double>();
    } else {
        throw UsageError("--check: dissipativity, psi, dirichlet, gradient-bound, adjoint, regularization or sobolev-id");
    }
    rep["check"] = check;
    rep["pass"] = pass;
    return pass ? kPass : kFail;
}

int cmd_sde(const json& cfg, json& rep) {
    JumpOuSpec spec{noise_of(cfg["noise"]), cfg["t"].get<double>(), cfg["paths"].get<int>(),
                    cfg["seed"].get<std::uint64_t>(), cfg["dt_record"].get<double>()};
    const std::string check = cfg["check"];
    rep = {{"noise", spec.describe()}};
    if (check == "coupling") {
        if (spec.dt_record > spec.t_end && spec.t_end > 0.0) spec.dt_record = spec.t_end;
        const CouplingReport r = coupled_decay(spec, cfg["x0"], cfg["y0"], cfg["tol"]);
        rep["coupling"] = r;
        rep["distance_at_t"] = r.distance.back();
        rep["pass"] = r.pass;
        return r.pass ? kPass : kFail;
    }
    if (check == "wasserstein") {
        const WassersteinReport r = wasserstein_contraction_check(spec, parse_initial(cfg["init"]), numbers(cfg["t_grid"]));
        rep["wasserstein"] = r;
        rep["pass"] = r.pass;
        return r.pass ? kPass : kFail;
    }
    if (check == "simulate") {
        const PathEnsemble e = simulate(spec, parse_initial(cfg["init"]));
        e.write_csv((prepare_out(cfg) / "paths.csv").string());
        rep["times"] = e.times;
        rep["pass"] = true;
        return kPass;
    }
    throw UsageError("--check: coupling, wasserstein or simulate");
}

int cmd_accept(const json& cfg, json& rep) {
    std::vector<int> which;
    for (double v : numbers(cfg["criteria"])) which.push_back(static_cast<int>(v));
    const auto results = run_acceptance(which, &std::cerr);
    json rows = json::array();
    bool all = true;
    for (const auto& r : results) {
        rows.push_back(r);
        all = all && r.pass;
    }
    std::ofstream table(prepare_out(cfg) / "acceptance_summary.txt");
    for (const auto& r : results) table << summary_line(r) << '\n';
    rep = {{"criteria", rows}, {"pass", all}};
    return all ? kPass : kFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fplab: discrete, fractional and classical Fokker-Planck laboratory"};
    app.require_subcommand(1);

    using Fn = int (*)(const json&, json&);
    struct Entry {
        const char* name;
        const char* help;
        Fn fn;
        std::vector<const char*> keys;
        json overrides = json::object();
    };
    const std::vector<Entry> entries{
        {"steady", "steady state vs the Fourier oracle", cmd_steady, {"model", "n", "L", "tol", "out"}, {{"tol", 1e-3}}},
        {"spectrum", "dense spectrum and gap", cmd_spectrum, {"model", "n", "L", "fourier_side", "k_leading", "out"}},
        {"gap-sweep", "spectral gap over a family", cmd_gap_sweep,
         {"family", "params", "side", "alpha", "target", "n", "L", "out"}},
        {"decay", "semigroup decay rate in a weighted norm", cmd_decay,
         {"model", "n", "L", "init", "weight", "t_end", "dt", "scheme", "a", "out"}},
        {"converge", "operator and projector convergence in eps", cmd_converge,
         {"family", "eps_list", "alpha", "n", "L", "probes", "seed", "out"}},
        {"verify", "inequality checks", cmd_verify,
         {"check", "model", "n", "L", "split", "M", "R", "eta", "lcut", "weight", "target_weight", "a", "b", "K",
          "p", "q", "eps", "alpha", "probes", "seed", "n_conv", "t_grid", "tol", "out"}},
        {"sde", "jump Ornstein-Uhlenbeck Monte Carlo", cmd_sde,
         {"noise", "check", "x0", "y0", "t", "paths", "seed", "dt_record", "init", "t_grid", "tol", "out"},
         {{"check", "coupling"}, {"tol", 1e-12}, {"init", "delta:3"}}},
        {"accept", "run the acceptance suite", cmd_accept, {"criteria", "out"}},
    };

    std::vector<std::unique_ptr<Command>> commands;
    for (const auto& e : entries) {
        auto c = std::make_unique<Command>();
        c->name = e.name;
        c->app = app.add_subcommand(e.name, e.help);
        c->overrides = e.overrides;
        add_keys(*c, e.keys);
        commands.push_back(std::move(c));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    for (std::size_t i = 0; i < commands.size(); ++i) {
        const Command& c = *commands[i];
        if (!c.app->parsed()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        json cfg, rep;
        try {
            cfg = resolve(c);
            // keep only the keys this command understands (plus out) in the persisted config
            json used = json::object();
            for (const auto& k : c.keys) used[k] = cfg[k];
            const int code = entries[i].fn(cfg, rep);
            persist(c.name, used, rep,
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            std::cout << rep.dump(2) << '\n';
            std::cerr << (code == kPass ? "PASS" : "FAIL") << '\n';
            return code;
        } catch (const NumericalError& e) {
            failure_record(c, cfg, {{"error", "numerical"}, {"command", c.name}, {"message", e.what()}});
            return kNumerical;
        } catch (const std::invalid_argument& e) {
            failure_record(c, cfg, {{"error", "usage"}, {"command", c.name}, {"message", e.what()}});
            return kUsage;
        } catch (const std::out_of_range& e) {
            failure_record(c, cfg, {{"error", "usage"}, {"command", c.name}, {"message", e.what()}});
            return kUsage;
        } catch (const json::exception& e) {
            failure_record(c, cfg, {{"error", "usage"}, {"command", c.name}, {"message", e.what()}});
            return kUsage;
        } catch (const std::exception& e) {
            failure_record(c, cfg, {{"error", "numerical"}, {"command", c.name}, {"message", e.what()}});
            return kNumerical;
        }
    }
    return kUsage;
}
