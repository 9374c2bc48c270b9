// Thin numpy-facing layer over libfplab. Fields cross as (L, values) with n = len(values),
// models as the same strings the command-line tool accepts.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "fplab/acceptance.hpp"
#include "fplab/error.hpp"
#include "fplab/jump_sde.hpp"
#include "fplab/kernels.hpp"
#include "fplab/norms.hpp"
#include "fplab/operators.hpp"
#include "fplab/semigroup.hpp"
#include "fplab/spectra.hpp"

namespace py = pybind11;
using namespace fplab;

namespace {

Field field_of(double L, const Eigen::VectorXd& values) {
    return Field(make_grid(L, static_cast<int>(values.size())), values);
}

JumpNoise noise_of(const std::string& kind, double p, double q) {
    if (kind == "stable") return AlphaStable{p};
    if (kind == "poisson") return CompoundPoisson{rescale(gaussian_reference_kernel(), p), 1.0 / (p * p)};
    if (kind == "truncated") return CompoundPoisson{truncated_fractional_kernel(q, p), 1.0};
    throw std::invalid_argument("noise kind: stable, poisson or truncated");
}

InitialSampler init_of(const std::string& text) { return parse_initial(text); }

py::dict decay_dict(const DecayReport& d) {
    py::dict r;
    r["times"] = d.times;
    r["norms"] = d.norms;
    r["rate"] = d.rate;
    r["prefactor"] = d.prefactor;
    r["residual"] = d.residual;
    r["clean"] = d.clean;
    r["skipped"] = d.skipped;
    r["message"] = d.message;
    return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Nonlocal Fokker-Planck operators, semigroups, spectra and jump-driven OU processes";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    m.def("nodes", [](double L, int n) { return make_grid(L, n).nodes(); }, py::arg("L"), py::arg("n"));

    m.def("describe_model", [](const std::string& s) { return describe(parse_model(s)); }, py::arg("model"));

    m.def(
        "assemble",
        [](const std::string& model, double L, int n) { return assemble(parse_model(model), make_grid(L, n)).entries; },
        py::arg("model"), py::arg("L"), py::arg("n"),
        "Generator matrix on the uniform grid of n nodes on [-L, L]; (df/dt)_i = sum_j M_ij f_j.");

    m.def(
        "steady_state",
        [](const std::string& model, double L, int n) {
            return steady_state(assemble(parse_model(model), make_grid(L, n))).values();
        },
        py::arg("model"), py::arg("L"), py::arg("n"));

    m.def(
        "fourier_steady_oracle",
        [](const std::string& model, double L, int n) {
            return fourier_steady_oracle(parse_model(model), make_grid(L, n)).values();
        },
        py::arg("model"), py::arg("L"), py::arg("n"));

    m.def(
        "evolve",
        [](const std::string& model, double L, const Eigen::VectorXd& f0, double t_end, double dt,
           const std::string& scheme) {
            const Field f = field_of(L, f0);
            EvolveSpec spec{t_end, dt, parse_time_scheme(scheme), 1};
            auto traj = evolve(assemble(parse_model(model), f.grid()), f, spec);
            return traj.back().f.values();
        },
        py::arg("model"), py::arg("L"), py::arg("f0"), py::arg("t_end"), py::arg("dt") = 0.01,
        py::arg("scheme") = "backward-euler", "Density at t_end.");

    m.def(
        "decay_rate",
        [](const std::string& model, double L, const Eigen::VectorXd& f0, const std::string& weight, double t_end,
           double dt, const std::string& scheme) {
            const Field f = field_of(L, f0);
            EvolveSpec spec{t_end, dt, parse_time_scheme(scheme), 1};
            return decay_dict(decay_rate(assemble(parse_model(model), f.grid()), f, WeightSpec::parse(weight), spec));
        },
        py::arg("model"), py::arg("L"), py::arg("f0"), py::arg("weight") = "1,0", py::arg("t_end") = 4.0,
        py::arg("dt") = 0.01, py::arg("scheme") = "expm");

    m.def(
        "weighted_norm",
        [](double L, const Eigen::VectorXd& v, const std::string& weight) {
            return weighted_norm(field_of(L, v), WeightSpec::parse(weight));
        },
        py::arg("L"), py::arg("values"), py::arg("weight"));

    m.def(
        "spectrum",
        [](const std::string& model, double L, int n, int k_leading) {
            auto s = eigen_spectrum(assemble(parse_model(model), make_grid(L, n)), k_leading);
            py::dict r;
            r["leading"] = s.leading;
            r["zero"] = s.zero;
            r["gap"] = s.gap;
            return r;
        },
        py::arg("model"), py::arg("L"), py::arg("n"), py::arg("k_leading") = 8);

    m.def("c_alpha", &c_alpha, py::arg("alpha"));
    m.def("khat_gaussian", [](double eps, double xi) { return rescale(gaussian_reference_kernel(), eps).khat(xi); },
          py::arg("eps"), py::arg("xi"));
    m.def("fourier_ratio_constant", [] { return fourier_ratio_constant(gaussian_reference_kernel()).K_star; });

    m.def(
        "simulate",
        [](const std::string& kind, double p, double q, const std::string& init, double t_end, int n_paths,
           std::uint64_t seed, double dt_record) {
            JumpOuSpec spec{noise_of(kind, p, q), t_end, n_paths, seed, dt_record};
            auto e = simulate(spec, init_of(init));
            return py::make_tuple(e.times, e.states);
        },
        py::arg("noise") = "stable", py::arg("p") = 1.5, py::arg("q") = 0.0, py::arg("init") = "delta:0",
        py::arg("t_end") = 1.0, py::arg("n_paths") = 1000, py::arg("seed") = 1, py::arg("dt_record") = 0.1,
        "Exact jump-OU paths; returns (times, states[times, paths]). noise: stable(p = alpha), "
        "poisson(p = eps) or truncated(p = eps, q = alpha).");

    m.def(
        "coupled_decay",
        [](const std::string& kind, double p, double q, double x0, double y0, double t_end, int n_paths,
           std::uint64_t seed) {
            JumpOuSpec spec{noise_of(kind, p, q), t_end, n_paths, seed, 0.01};
            auto r = coupled_decay(spec, x0, y0);
            py::dict d;
            d["times"] = r.times;
            d["distance"] = r.distance;
            d["max_error"] = r.max_error;
            d["pass"] = r.pass;
            return d;
        },
        py::arg("noise") = "stable", py::arg("p") = 1.5, py::arg("q") = 0.0, py::arg("x0") = 1.0, py::arg("y0") = 0.0,
        py::arg("t_end") = 1.0, py::arg("n_paths") = 1000, py::arg("seed") = 1);

    m.def("empirical_w1",
          [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return empirical_w1(a, b); }, py::arg("a"),
          py::arg("b"));

    m.def(
        "run_acceptance",
        [](const std::vector<int>& which) {
            std::vector<CriterionResult> res;
            {
                py::gil_scoped_release nogil;
                res = run_acceptance(which);
            }
            py::list out;
            for (const auto& r : res) {
                py::dict d;
                d["id"] = r.id;
                d["title"] = r.title;
                d["pass"] = r.pass;
                d["seconds"] = r.seconds;
                d["metrics"] = r.metrics;
                d["error"] = r.error;
                out.append(d);
            }
            return out;
        },
        py::arg("which") = std::vector<int>{});
}
