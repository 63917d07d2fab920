#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hypball/geometry.hpp"
#include "hypball/harness.hpp"
#include "hypball/inequalities.hpp"
#include "hypball/norms.hpp"
#include "hypball/rearrange.hpp"
#include "hypball/superlevel.hpp"

namespace py = pybind11;
using namespace hypball;

namespace {

py::dict estimate_dict(const IntegralEstimate& e) {
    py::dict d;
    d["value"] = e.value;
    d["std_error"] = e.std_error;
    d["samples"] = e.samples;
    d["method"] = std::string(to_string(e.method));
    d["warning"] = e.warning;
    return d;
}

SpaceParams space_of(const std::string& space, int n, double p, double alpha) {
    if (space == "hardy") return SpaceParams::hardy(n, p);
    if (space == "bergman") return SpaceParams::bergman(n, p, alpha);
    throw std::invalid_argument("space must be 'hardy' or 'bergman'");
}

py::dict curve_dict(const inequalities::CurveCheck& c) {
    py::dict d;
    d["rho"] = c.rho;
    d["lhs"] = c.lhs;
    d["rhs"] = c.rhs;
    d["margins"] = c.margins;
    d["worst"] = c.worst;
    d["pass"] = c.pass;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Geometry, norms, superlevel sets and inequality checks on the complex hyperbolic ball";

    py::class_<Polynomial>(m, "Polynomial")
        .def(py::init<int>(), py::arg("n"))
        .def_static("constant", &Polynomial::constant, py::arg("n"), py::arg("c"))
        .def_static("coordinate", &Polynomial::coordinate, py::arg("n"), py::arg("i"))
        .def_static("from_json", &holo::polynomial_from_json, py::arg("text"))
        .def("to_json", [](const Polynomial& f) { return holo::polynomial_to_json(f); })
        .def(
            "add_term",
            [](Polynomial& f, std::vector<int> exponents, Complex c) -> Polynomial& {
                return f.add_term(MultiIndex(std::move(exponents)), c);
            },
            py::arg("exponents"), py::arg("c"), py::return_value_policy::reference_internal)
        .def_property_readonly("n", &Polynomial::dim)
        .def_property_readonly("degree", &Polynomial::degree)
        .def("__call__", [](const Polynomial& f, const CVector& z) {
            if (static_cast<int>(z.size()) != f.dim()) throw std::invalid_argument("point has the wrong dimension");
            return f(std::span<const Complex>(z));
        });

    m.def(
        "geodesic_radius", [](const CVector& z) { return geometry::geodesic_radius(BallPoint(z)).rho; }, py::arg("z"));
    m.def(
        "geodesic_ball_volume", [](double rho, int n) { return geometry::geodesic_ball_volume({rho}, n); }, py::arg("rho"),
        py::arg("n"));
    m.def(
        "geodesic_sphere_area", [](double rho, int n) { return geometry::geodesic_sphere_area({rho}, n); }, py::arg("rho"),
        py::arg("n"));

    m.def(
        "norm",
        [](const Polynomial& f, const std::string& space, double p, double alpha, std::uint64_t seed, int samples) {
            return estimate_dict(norms::norm(f, space_of(space, f.dim(), p, alpha), McConfig{seed, samples, 64}));
        },
        py::arg("f"), py::arg("space") = "bergman", py::arg("p") = 2.0, py::arg("alpha") = 2.5, py::arg("seed") = 42,
        py::arg("samples") = 200000, "Hardy or weighted Bergman norm with its error estimate.");

    m.def(
        "distribution_function",
        [](const Polynomial& f, double a, double b, std::optional<std::vector<double>> t_grid, std::uint64_t seed, int directions) {
            const LevelFunction u(f, a, b);
            const McConfig cfg{seed, directions, 48};
            const auto mu = t_grid ? superlevel::distribution_function(u, *t_grid, cfg) : superlevel::distribution_function(u, cfg);
            const auto g = superlevel::monotone_functional(mu, b);
            py::dict d;
            d["t"] = mu.t_grid;
            d["mu"] = mu.mu;
            d["mu_stderr"] = mu.mu_stderr;
            d["g"] = g.g;
            d["g_stderr"] = g.g_stderr;
            d["t0"] = mu.t0;
            return d;
        },
        py::arg("f"), py::arg("a") = 1.0, py::arg("b") = 1.0, py::arg("t_grid") = py::none(), py::arg("seed") = 42,
        py::arg("directions") = 1024, "Hyperbolic volume of the superlevel sets of |f|^a (1 - |z|^2)^b.");

    m.def(
        "weak_type_margin",
        [](const Polynomial& f, double r, std::uint64_t seed, int directions) {
            const auto w = superlevel::weak_type_check(f, r, McConfig{seed, directions, 48});
            return py::make_tuple(w.margins.worst, w.margins.pass);
        },
        py::arg("f"), py::arg("r") = 1.0, py::arg("seed") = 42, py::arg("directions") = 1024,
        "Largest tolerance-adjusted violation of mu(t) <= (1/t - 1)^n and the pass flag.");

    m.def(
        "decreasing_rearrangement",
        [](const Polynomial& f, double a, double b, std::uint64_t seed, int directions) {
            const LevelFunction u(f, a, b);
            const auto mu = superlevel::distribution_function(u, McConfig{seed, directions, 48});
            const auto us = rearrange::decreasing_rearrangement(mu, b / f.dim());
            return py::make_tuple(us.s_grid, us.ustar);
        },
        py::arg("f"), py::arg("a") = 1.0, py::arg("b") = 1.0, py::arg("seed") = 42, py::arg("directions") = 1024);

    m.def("sobolev_constant", &inequalities::sobolev_constant, py::arg("n_real"), py::arg("p"));
    m.def("ell_integral", &inequalities::ell_integral, py::arg("n"), py::arg("p"));
    m.def("sup_representation", &inequalities::sup_representation, py::arg("a"), py::arg("b"), py::arg("alpha"));
    m.def(
        "isoperimetric_model_check",
        [](const std::vector<double>& rho, int n) { return curve_dict(inequalities::isoperimetric_model_check(rho, n)); },
        py::arg("rho"), py::arg("n"));
    m.def(
        "isoperimetric_refined_check",
        [](const std::vector<double>& rho, int n) { return curve_dict(inequalities::isoperimetric_refined_check(rho, n)); },
        py::arg("rho"), py::arg("n"));
    m.def(
        "sobolev_check",
        [](const Polynomial& f, double a, double b, double p, const std::string& regime, double tau_fraction, std::uint64_t seed,
           int directions) {
            const LevelFunction w(f, a, b);
            const double tau = tau_fraction * holo::level_maximum(w).value;
            const auto r = inequalities::sobolev_check(w, tau, p, inequalities::parse_regime(regime), McConfig{seed, directions, 48});
            py::dict d;
            d["lhs"] = r.lhs.value;
            d["rhs"] = r.rhs.value;
            d["margin"] = r.margin;
            d["tolerance"] = r.tolerance;
            d["pass"] = r.pass;
            return d;
        },
        py::arg("f"), py::arg("a"), py::arg("b"), py::arg("p"), py::arg("regime"), py::arg("tau_fraction") = 0.05,
        py::arg("seed") = 42, py::arg("directions") = 1024);
    m.def(
        "weighted_hardy",
        [](std::function<double(double)> f, double lo, double hi, double p, double eps) {
            const auto r = inequalities::weighted_hardy_check({std::move(f), lo, hi}, p, eps);
            return py::make_tuple(r.lhs, r.rhs, r.pass);
        },
        py::arg("f"), py::arg("lo"), py::arg("hi"), py::arg("p"), py::arg("eps"),
        "Returns (C int f^p x^eps, int (F/x)^p x^eps, pass) for f supported on [lo, hi].");

    py::register_exception<harness::ConfigError>(m, "ConfigError", PyExc_ValueError);
    m.def(
        "run_suite",
        [](const std::string& config_json) {
            const auto cfg = harness::config_from_json(config_json.empty() ? "{}" : config_json);
            harness::SuiteResult result;
            {
                py::gil_scoped_release release;
                result = harness::run_suite(cfg);
            }
            return py::make_tuple(harness::report_json(cfg, result.records), result.exit_code);
        },
        py::arg("config_json") = "",
        "Runs the configured verification suites; returns (report JSON, exit code).");
}
