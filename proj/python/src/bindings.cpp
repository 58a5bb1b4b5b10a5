#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zmc/cli/audit.hpp"
#include "zmc/closedform.hpp"
#include "zmc/conserved.hpp"
#include "zmc/errors.hpp"
#include "zmc/evolution.hpp"
#include "zmc/profile.hpp"
#include "zmc/residual.hpp"
#include "zmc/similarity.hpp"
#include "zmc/stability.hpp"

namespace py = pybind11;
using namespace zmc;

namespace {

py::dict jet_dict(const Jet2& j) {
  py::dict d;
  d["value"] = j.value;
  d["d0"] = j.d0;
  d["d1"] = j.d1;
  d["d00"] = j.d00;
  d["d01"] = j.d01;
  d["d11"] = j.d11;
  return d;
}

Jet2 jet_from(const py::dict& d) {
  Jet2 j;
  j.value = d.contains("value") ? d["value"].cast<double>() : 0.0;
  j.d0 = d.contains("d0") ? d["d0"].cast<double>() : 0.0;
  j.d1 = d.contains("d1") ? d["d1"].cast<double>() : 0.0;
  j.d00 = d.contains("d00") ? d["d00"].cast<double>() : 0.0;
  j.d01 = d.contains("d01") ? d["d01"].cast<double>() : 0.0;
  j.d11 = d.contains("d11") ? d["d11"].cast<double>() : 0.0;
  return j;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Zero mean curvature blow-up toolkit";

  auto base = py::register_exception<Error>(m, "ZmcError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<DegeneracyError>(m, "DegeneracyError", base.ptr());
  py::register_exception<SingularPointError>(m, "SingularPointError", base.ptr());
  py::register_exception<ArityError>(m, "ArityError", base.ptr());

  m.def(
      "evaluate_jet",
      [](const std::string& family, double T, double k, double a, double b) {
        return jet_dict(evaluate_jet(ClosedFormSolution(family_from_string(family), T, k), {a, b}));
      },
      py::arg("family"), py::arg("T"), py::arg("k"), py::arg("a"), py::arg("b"));

  m.def(
      "residual_at",
      [](const std::string& equation, const py::dict& jet, double a, double b) {
        return residual_at(equation_from_string(equation), jet_from(jet), Point{a, b});
      },
      py::arg("equation"), py::arg("jet"), py::arg("a"), py::arg("b"));

  m.def(
      "sweep_json",
      [](const std::string& equation, const std::string& family, double T, double k, int per_axis) {
        const EquationId eq = equation_from_string(equation);
        return to_json(sweep_residual(eq, ClosedFormSolution(family_from_string(family), T, k),
                                      cli::verification_sampler(eq, T, per_axis)))
            .dump();
      },
      py::arg("equation"), py::arg("family"), py::arg("T") = 1.0, py::arg("k") = 1.0, py::arg("per_axis") = 100);

  m.def(
      "steady_integrate",
      [](const std::string& which, double v0, double dv0, double rho0, double rho_end, double drho) {
        const SteadyOde id = which == "spacelike" ? SteadyOde::SpacelikeSteady : SteadyOde::BornInfeldSteady;
        const SteadySolution s = steady_ode_integrate(id, v0, dv0, rho0, rho_end, drho);
        return py::make_tuple(s.rho, s.v);
      },
      py::arg("equation"), py::arg("v0"), py::arg("dv0"), py::arg("rho0"), py::arg("rho_end"), py::arg("drho"));

  m.def("profile_residual", [](double rho, double phi, double dphi, double d2phi) {
    return profile_residual({rho, phi, dphi}, d2phi);
  });
  m.def("first_order_branch_residual", &first_order_branch_residual);

  m.def(
      "shoot_profile",
      [](double a, double rho_max, double drho) {
        const ProfileSolveResult r = shoot_profile(a, rho_max, drho);
        std::vector<double> rho, phi;
        for (const ProfileState& s : r.samples) {
          rho.push_back(s.rho);
          phi.push_back(s.phi);
        }
        py::dict d;
        d["rho"] = rho;
        d["phi"] = phi;
        d["termination"] = to_string(r.termination);
        d["degeneracy_location"] = r.degeneracy_location ? py::cast(*r.degeneracy_location) : py::none();
        return d;
      },
      py::arg("a"), py::arg("rho_max") = 0.9, py::arg("drho") = 1e-3);

  m.def("mode_roots", [] {
    const ModeReport r = solve_mode_quadratic();
    return py::make_tuple(r.roots[0], r.roots[1]);
  });

  m.def(
      "linearized_coefficients",
      [](double phi, double dphi, double d2phi, double rho) {
        const LinearizedCoefficients c = linearized_coefficients(phi, dphi, d2phi, rho);
        py::dict d;
        d["tt"] = c.c_tt;
        d["tr"] = c.c_tr;
        d["rr"] = c.c_rr;
        d["t"] = c.c_t;
        d["r"] = c.c_r;
        d["v"] = c.c_v;
        return d;
      },
      py::arg("phi"), py::arg("dphi"), py::arg("d2phi"), py::arg("rho"));

  m.def(
      "evolve_born_infeld",
      [](double k, double T, int n, double L, double t_end, double dissipation) {
        EvolutionConfig cfg;
        cfg.dissipation_coeff = dissipation;
        cfg.stop.t_end = t_end;
        const ClosedFormSolution sol(Family::BornInfeldLog, T, k);
        const Grid1D grid(-L, L, n);
        const EvolutionResult r = evolve(state_from_closed_form(sol, grid, 0.0), cfg);
        std::vector<double> t, q0, x, u;
        for (const DiagnosticRow& row : r.diagnostics) {
          t.push_back(row.t);
          q0.push_back(row.q_at_origin);
        }
        const EvolutionState& s = r.final_state;
        for (int i = s.lo; i <= s.hi; ++i) {
          x.push_back(grid.node(i));
          u.push_back(s.u[i]);
        }
        py::dict d;
        d["t"] = t;
        d["q_at_origin"] = q0;
        d["x"] = x;
        d["u"] = u;
        d["t_final"] = s.t;
        d["termination"] = to_string(r.termination);
        return d;
      },
      py::arg("k") = 0.2, py::arg("T") = 1.0, py::arg("n") = 400, py::arg("L") = 0.85, py::arg("t_end") = 0.8,
      py::arg("dissipation") = 0.0);

  m.def(
      "fit_blowup_rate",
      [](const std::vector<double>& t, const std::vector<double>& g, double T, double lo, double hi) {
        const BlowupFit f = fit_blowup_rate(t, g, T, {lo, hi});
        return py::make_tuple(f.fitted_exponent, f.fitted_amplitude);
      },
      py::arg("t"), py::arg("g"), py::arg("T"), py::arg("t_lo"), py::arg("t_hi"));

  m.def("momentum_density", &momentum_density);

  m.def(
      "scaling_exponent",
      [](const FieldGradient& field, const std::vector<double>& lambdas, const std::string& weight) {
        return measure_scaling_exponent(field, lambdas, weight_from_string(weight)).measured_exponent;
      },
      py::arg("field"), py::arg("lambdas"), py::arg("weight") = "x-weight");

  m.def("audit_json", [] { return to_json(cli::run_audit()).dump(2); });
}
