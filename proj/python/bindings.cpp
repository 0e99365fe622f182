#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

#include "wallforge/asymptotics.hpp"
#include "wallforge/certifier.hpp"
#include "wallforge/errors.hpp"
#include "wallforge/grid1d.hpp"
#include "wallforge/model.hpp"
#include "wallforge/solver1d.hpp"

namespace py = pybind11;
using namespace wallforge;

namespace {

// Rebuild a Profile from node arrays, with the same symmetry and uniformity
// demands the CSV reader makes: x must run over a uniform grid on [-R, R]
// with an even interval count.
Profile profile_from_arrays(const std::vector<double>& x, const std::vector<double>& u,
                            const std::vector<double>& v) {
    if (x.size() != u.size() || x.size() != v.size())
        throw Error(ErrorCode::ParseError, "x, u, v must have equal length");
    if (x.size() < 5)
        throw Error(ErrorCode::ParseError, "need at least 5 nodes");
    const double R = x.back();
    if (!(R > 0.0) || std::abs(x.front() + R) > 1e-9 * std::max(1.0, R))
        throw Error(ErrorCode::ParseError, "x must span a symmetric interval [-R, R]");
    Grid g{R, static_cast<int>(x.size()) - 2};
    for (size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i] - g.x(static_cast<int>(i))) > 1e-9 * std::max(1.0, R))
            throw Error(ErrorCode::ParseError, "x nodes are not uniform");
    Profile prof = make_profile(g);
    prof.u = u;
    prof.v = v;
    return prof;
}

std::vector<double> grid_nodes(const Grid& g) {
    std::vector<double> x(g.n_nodes());
    for (int i = 0; i < g.n_nodes(); ++i) x[i] = g.x(i);
    return x;
}

py::object target_object(const CheckRecord& c) {
    if (c.target_lo == c.target_hi) return py::float_(c.target_lo);
    return py::make_tuple(c.target_lo, c.target_hi);
}

py::dict certificate_to_dict(const Certificate& cert) {
    py::dict d;
    py::dict params;
    params["alpha"] = cert.params.alpha;
    params["omega"] = cert.params.omega;
    d["params"] = params;
    py::dict grid;
    grid["R"] = cert.R;
    grid["h"] = cert.h;
    d["grid"] = grid;
    py::list checks;
    for (const auto& c : cert.checks) {
        py::dict e;
        e["name"] = c.name;
        e["paper_ref"] = c.paper_ref;
        e["measured"] = c.measured;
        e["target"] = target_object(c);
        e["tolerance"] = c.tolerance;
        e["pass"] = c.pass;
        checks.append(e);
    }
    d["checks"] = checks;
    d["overall_pass"] = cert.overall_pass;
    return d;
}

py::dict fit_to_dict(const Params& p, const Profile& prof, const TailFit& fit) {
    py::dict d;
    d["alpha"] = p.alpha;
    d["omega"] = p.omega;
    d["R"] = prof.grid.R;
    d["h"] = prof.grid.h();
    d["rate_u"] = fit.rate_u;
    d["rate_v"] = fit.rate_v;
    d["lambda_minus_theory"] = fit.lambda_minus_theory;
    d["ell1"] = fit.ell1;
    d["ell2"] = fit.ell2;
    d["mu_theory"] = fit.mu_theory;
    py::dict w;
    w["x_lo"] = fit.window.x_lo;
    w["x_hi"] = fit.window.x_hi;
    w["count"] = fit.window.count;
    d["window"] = w;
    d["residual_rms"] = fit.residual_rms;
    d["unreliable"] = fit.unreliable;
    return d;
}

py::dict solve_impl(double alpha, double omega, std::optional<std::vector<double>> R_values,
                    std::optional<double> h, double steepness, double residual_tol) {
    Params p{alpha, omega};
    validate(p);
    if (classify(p) == Regime::ConstantOnly)
        throw Error(ErrorCode::WrongRegime,
                    "omega/alpha >= 1/2 is the ConstantOnly regime; no wall to solve");
    ContinuationSchedule sched;
    if (R_values) {
        sched.R_values = *R_values;
        sched.target_h = h.value_or(0.01);
    } else {
        sched = default_schedule(p);
        if (h) sched.target_h = *h;
    }
    SolveOptions opt;
    opt.residual_tol = residual_tol;
    ContinuationResult res = continue_in_R(p, sched, opt, steepness);
    const Profile& prof = res.final();
    py::dict d;
    d["alpha"] = alpha;
    d["omega"] = omega;
    d["R"] = prof.grid.R;
    d["h"] = prof.grid.h();
    d["x"] = grid_nodes(prof.grid);
    d["u"] = prof.u;
    d["v"] = prof.v;
    d["iterations"] = res.iterations;
    d["residual_sup"] = res.residual_sup;
    return d;
}

py::dict certify_impl(double alpha, double omega, const std::vector<double>& x,
                      const std::vector<double>& u, const std::vector<double>& v,
                      bool independent) {
    Params p{alpha, omega};
    validate(p);
    Profile prof = profile_from_arrays(x, u, v);
    if (independent && classify(p) != Regime::ConstantOnly) {
        SolveOptions opt;
        ContinuationResult other =
            continue_in_R(p, default_schedule(p), opt, 2.0 * default_steepness(p));
        return certificate_to_dict(certify_all(p, prof, &other.final()));
    }
    return certificate_to_dict(certify_all(p, prof, nullptr));
}

py::dict fit_tail_impl(double alpha, double omega, const std::vector<double>& x,
                       const std::vector<double>& u, const std::vector<double>& v) {
    Params p{alpha, omega};
    validate(p);
    Profile prof = profile_from_arrays(x, u, v);
    return fit_to_dict(p, prof, fit_decay(p, prof));
}

py::dict relax_constant_impl(double alpha, double omega, double R, double h, double value) {
    Params p{alpha, omega};
    validate(p);
    Profile guess = make_profile(make_grid(R, h));
    for (size_t i = 0; i < guess.u.size(); ++i) {
        guess.u[i] = value;
        guess.v[i] = value;
    }
    SolveResult res = relax_neumann(p, guess);
    py::dict d;
    d["x"] = grid_nodes(res.profile.grid);
    d["u"] = res.profile.u;
    d["v"] = res.profile.v;
    d["iterations"] = res.iterations;
    d["residual_sup"] = res.residual_sup;
    d["c"] = equilibria(p).c;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Domain-wall solver and certifier for a Rabi-coupled two-component "
              "Gross-Pitaevskii system";

    py::register_exception<Error>(m, "WallforgeError");

    py::enum_<Regime>(m, "Regime")
        .value("Heteroclinic", Regime::Heteroclinic)
        .value("OmegaZero", Regime::OmegaZero)
        .value("ConstantOnly", Regime::ConstantOnly);

    py::class_<Params>(m, "Params")
        .def(py::init<double, double>(), py::arg("alpha") = 1.0, py::arg("omega") = 0.0)
        .def_readwrite("alpha", &Params::alpha)
        .def_readwrite("omega", &Params::omega)
        .def("__repr__", [](const Params& p) {
            return "Params(alpha=" + std::to_string(p.alpha) +
                   ", omega=" + std::to_string(p.omega) + ")";
        });

    py::class_<Equilibria>(m, "Equilibria")
        .def_readonly("a", &Equilibria::a)
        .def_readonly("b", &Equilibria::b)
        .def_readonly("c", &Equilibria::c)
        .def_readonly("has_wall_pair", &Equilibria::has_wall_pair);

    py::class_<LinearData>(m, "LinearData")
        .def_readonly("a11", &LinearData::a11)
        .def_readonly("a12", &LinearData::a12)
        .def_readonly("a22", &LinearData::a22)
        .def_readonly("lambda_minus", &LinearData::lambda_minus)
        .def_readonly("lambda_plus", &LinearData::lambda_plus)
        .def_property_readonly("mu", [](const LinearData& ld) -> py::object {
            if (ld.mu) return py::float_(*ld.mu);
            return py::none();
        });

    m.def("classify", [](double alpha, double omega) { return classify(Params{alpha, omega}); },
          py::arg("alpha"), py::arg("omega"));
    m.def("equilibria",
          [](double alpha, double omega) {
              Params p{alpha, omega};
              validate(p);
              return equilibria(p);
          },
          py::arg("alpha"), py::arg("omega"));
    m.def("linear_data",
          [](double alpha, double omega) {
              Params p{alpha, omega};
              validate(p);
              return linear_data(p);
          },
          py::arg("alpha"), py::arg("omega"));

    m.def("solve", &solve_impl, py::arg("alpha"), py::arg("omega"),
          py::arg("R_values") = py::none(), py::arg("h") = py::none(),
          py::arg("steepness") = 0.0, py::arg("residual_tol") = 1e-10,
          "Continue the wall through increasing half-widths; returns node arrays "
          "and convergence data.");
    m.def("certify", &certify_impl, py::arg("alpha"), py::arg("omega"), py::arg("x"),
          py::arg("u"), py::arg("v"), py::arg("independent") = true,
          "Run every applicable certificate check on the given profile.");
    m.def("fit_tail", &fit_tail_impl, py::arg("alpha"), py::arg("omega"), py::arg("x"),
          py::arg("u"), py::arg("v"),
          "Log-linear decay fit of the right tail against the far-field linearization.");
    m.def("relax_constant", &relax_constant_impl, py::arg("alpha"), py::arg("omega"),
          py::arg("R") = 12.0, py::arg("h") = 0.05, py::arg("value") = 0.7,
          "Zero-flux relaxation from a constant positive guess.");
}
