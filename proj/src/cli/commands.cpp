#include "zmc/cli/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "CLI11.hpp"

#include "zmc/cli/audit.hpp"
#include "zmc/cli/config.hpp"
#include "zmc/closedform.hpp"
#include "zmc/conserved.hpp"
#include "zmc/errors.hpp"
#include "zmc/evolution.hpp"
#include "zmc/profile.hpp"
#include "zmc/residual.hpp"
#include "zmc/similarity.hpp"
#include "zmc/stability.hpp"

namespace zmc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

json finite_json(const json& j) {
  if (j.is_object()) {
    json out = json::object();
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_number_float() && !std::isfinite(it.value().get<double>())) {
        out[it.key()] = nullptr;
        out[it.key() + "_reason"] = "non-finite value";
      } else {
        out[it.key()] = finite_json(it.value());
      }
    }
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (const json& v : j) out.push_back(finite_json(v));
    return out;
  }
  if (j.is_number_float() && !std::isfinite(j.get<double>())) return nullptr;
  return j;
}

std::string output_dir() {
  const char* env = std::getenv("ZMC_OUTPUT_DIR");
  return env && *env ? env : ".";
}

namespace {

std::string resolve_output(const std::string& path) {
  fs::path p(path);
  if (!p.has_parent_path()) p = fs::path(output_dir()) / p;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p.string();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  return f;
}

void emit(std::ostream& out, const json& j, const std::string& path = "") {
  const std::string text = finite_json(j).dump(2) + "\n";
  if (!path.empty()) {
    std::ofstream f = open_output(resolve_output(path));
    f << text;
  }
  out << text;
}

// ---- verify -----------------------------------------------------------------

struct Expectation {
  bool solution;     // residual must stay below threshold; otherwise exceed it
  double threshold;
};

std::optional<Expectation> expectation_for(EquationId eq, Family f) {
  switch (eq) {
    case EquationId::BornInfeld:
    case EquationId::DivergenceForm:
      if (f == Family::BornInfeldLog || f == Family::ConstantProfile) return Expectation{true, 1e-9};
      break;
    case EquationId::RadialMembrane:
      if (is_membrane(f) || f == Family::ConstantProfile) return Expectation{true, 1e-9};
      break;
    case EquationId::Eikonal:
      if (is_membrane(f)) return Expectation{true, 1e-12};
      break;
    case EquationId::SpacelikeZmc:
      if (f == Family::SpacelikeArctanCorrected) return Expectation{true, 1e-9};
      if (f == Family::SpacelikeLogClaimed) return Expectation{false, 0.1};
      break;
  }
  return std::nullopt;
}

struct VerifyArgs {
  std::string equation, family, output;
  double k = 1.0, T = 1.0;
  int per_axis = 100;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const EquationId eq = equation_from_string(a.equation);
  std::vector<Family> families;
  if (a.family == "sphere") {
    families = {Family::MembraneSpherePlus, Family::MembraneSphereMinus};
  } else {
    families = {family_from_string(a.family)};
  }
  for (Family f : families) {
    if (!expectation_for(eq, f)) {
      throw DomainError("family '" + (a.family == "sphere" ? a.family : to_string(f)) + "' is not paired with equation '" +
                        a.equation + "'");
    }
  }
  if (a.per_axis < 2) throw DomainError("--samples-per-axis must be >= 2");

  json results = json::array();
  bool all = true;
  for (Family f : families) {
    const Expectation e = *expectation_for(eq, f);
    const ResidualReport r = sweep_residual(eq, ClosedFormSolution(f, a.T, a.k), verification_sampler(eq, a.T, a.per_axis));
    const bool passed = e.solution ? r.max_abs <= e.threshold : r.max_abs >= e.threshold;
    all = all && passed;
    json j = to_json(r);
    j["family"] = to_string(f);
    j["k"] = a.k;
    j["T"] = a.T;
    j["expectation"] = e.solution ? "solution" : "non-solution";
    j["threshold"] = e.threshold;
    j["passed"] = passed;
    results.push_back(j);
  }
  emit(out, {{"command", "verify"}, {"results", results}, {"passed", all}}, a.output);
  return all ? kExitOk : kExitToleranceFailure;
}

// ---- profile ----------------------------------------------------------------

struct ProfileArgs {
  std::optional<double> a;
  double rho_max = 0.9, drho = 1e-3, tol = 0.0, eps_deg = 1e-8;
  std::string branch, output = "profile.csv";
  int samples = 1000;
};

int cmd_profile(const ProfileArgs& a, std::ostream& out) {
  if (!a.branch.empty()) {
    if (a.branch != "plus" && a.branch != "minus") throw DomainError("--branch must be plus or minus");
    const ResidualReport r = verify_branch(a.branch == "plus" ? 1 : -1, a.samples, 0.01, 0.99);
    json j = to_json(r);
    j["threshold"] = 1e-9;
    j["passed"] = r.max_abs <= 1e-9;
    emit(out, {{"command", "profile"}, {"branch", a.branch}, {"report", j}});
    return r.max_abs <= 1e-9 ? kExitOk : kExitToleranceFailure;
  }
  if (!a.a) throw DomainError("profile needs --a or --branch");
  ProfileOptions opts;
  opts.eps_deg = a.eps_deg;
  opts.tolerance = a.tol;
  const ProfileSolveResult r = shoot_profile(*a.a, a.rho_max, a.drho, opts);
  const std::string path = resolve_output(a.output);
  std::ofstream f = open_output(path);
  write_profile_csv(f, r);

  double dev = 0.0;
  for (const ProfileState& s : r.samples) dev = std::max(dev, std::abs(s.phi - *a.a));
  json j{{"command", "profile"},
         {"a", *a.a},
         {"termination", to_string(r.termination)},
         {"n_samples", r.samples.size()},
         {"rho_last", r.samples.back().rho},
         {"max_deviation_from_a", dev},
         {"csv", path}};
  if (r.degeneracy_location) {
    j["degeneracy_location"] = *r.degeneracy_location;
  } else {
    j["degeneracy_location"] = nullptr;
    j["degeneracy_location_reason"] = "degenerate manifold not reached";
  }
  emit(out, j);
  return kExitOk;
}

// ---- steady -----------------------------------------------------------------

struct SteadyArgs {
  std::string equation = "born-infeld", output = "steady.csv";
  double k = 1.0, drho = 1e-3;
  std::optional<double> rho_end;
};

int cmd_steady(const SteadyArgs& a, std::ostream& out) {
  SteadyOde id;
  double v1 = 0.0;
  if (a.equation == "born-infeld") {
    id = SteadyOde::BornInfeldSteady;
    v1 = 2.0 * a.k;
  } else if (a.equation == "spacelike") {
    id = SteadyOde::SpacelikeSteady;
    v1 = a.k;
  } else {
    throw DomainError("steady --equation must be born-infeld or spacelike");
  }
  const double rho_end = a.rho_end.value_or(id == SteadyOde::BornInfeldSteady ? 0.9 : 2.0);
  const SteadySolution s = steady_ode_integrate(id, 0.0, v1, 0.0, rho_end, a.drho);
  const std::string path = resolve_output(a.output);
  std::ofstream f = open_output(path);
  write_steady_csv(f, s, id, a.k);

  double err_claimed = 0.0, err_corrected = 0.0;
  for (size_t i = 0; i < s.rho.size(); ++i) {
    const SteadyClosedForm cf = steady_ode_closed_form(id, a.k, s.rho[i]);
    err_claimed = std::max(err_claimed, std::abs(s.v[i] - cf.claimed));
    err_corrected = std::max(err_corrected, std::abs(s.v[i] - cf.corrected));
  }
  emit(out, {{"command", "steady"},
             {"equation", a.equation},
             {"k", a.k},
             {"rho_end", rho_end},
             {"sup_error_claimed", err_claimed},
             {"sup_error_corrected", err_corrected},
             {"csv", path}});
  return kExitOk;
}

// ---- evolve -----------------------------------------------------------------

const std::vector<std::string> kEvolveKeys{
    "equation",    "family",        "k",          "T",        "lo",           "hi",           "n",
    "layout",      "cfl_safety",    "dissipation", "t_end",   "max_gradient", "min_discriminant_floor",
    "dt_floor",    "excision_safety", "snapshot_every", "bump_amplitude", "bump_width", "diagnostics",
    "snapshots",   "fit",           "fit_lo",     "fit_hi"};

struct EvolveArgs {
  std::string config;
  std::vector<std::string> overrides;
};

EvolutionState initial_state(const std::string& family, EvolutionEquation eq, double T, double k, const Grid1D& grid,
                             double bump_amp, double bump_width) {
  const int n = grid.num_nodes();
  EvolutionState s = [&] {
    if (family == "zero") {
      return make_state(grid, 0.0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
    }
    const Family f = family_from_string(family);
    const bool ok = eq == EvolutionEquation::BornInfeld ? (f == Family::BornInfeldLog || f == Family::ConstantProfile)
                                                         : (is_membrane(f) || f == Family::ConstantProfile);
    if (!ok) throw ConfigError("family '" + family + "' cannot be evolved with this equation");
    return state_from_closed_form(ClosedFormSolution(f, T, k), grid, 0.0);
  }();
  if (bump_amp != 0.0) {
    if (!(bump_width > 0.0)) throw ConfigError("bump_width must be positive");
    // Perturb u_t: an even bump in u would leave 1 - p^2 + q^2 = 0 on the
    // axis of the sphere background.
    for (int i = 0; i < n; ++i) {
      const double z = grid.node(i) / bump_width;
      s.p[i] += bump_amp * std::exp(-z * z);
    }
    s.refresh_min_discriminant();
  }
  return s;
}

int cmd_evolve(const EvolveArgs& a, std::ostream& out) {
  RunConfig cfg = a.config.empty() ? RunConfig{} : RunConfig::load(a.config);
  for (const std::string& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.reject_unknown(kEvolveKeys);

  const std::string eq_name = cfg.get_string("equation");
  EvolutionConfig ec;
  if (eq_name == "born-infeld") {
    ec.equation = EvolutionEquation::BornInfeld;
  } else if (eq_name == "membrane") {
    ec.equation = EvolutionEquation::RadialMembrane;
  } else {
    throw ConfigError("equation must be born-infeld or membrane, got '" + eq_name + "'");
  }
  const bool membrane = ec.equation == EvolutionEquation::RadialMembrane;
  const std::string layout = cfg.find_string("layout").value_or("half-line");
  if (layout == "half-line") {
    ec.layout = RadialLayout::HalfLine;
  } else if (layout == "full-line") {
    ec.layout = RadialLayout::FullLine;
  } else {
    throw ConfigError("layout must be half-line or full-line");
  }
  const bool half = membrane && ec.layout == RadialLayout::HalfLine;

  const std::string family = cfg.find_string("family").value_or(membrane ? "sphere-plus" : "log");
  const double T = cfg.get_double("T", 1.0);
  const double k = cfg.get_double("k", 0.2);
  const double lo = cfg.get_double("lo", half ? 0.0 : -0.85);
  const double hi = cfg.get_double("hi", 0.85);
  const int n = cfg.get_int("n", 400);
  ec.T_blowup_hint = T;
  ec.cfl_safety = cfg.get_double("cfl_safety", 0.5);
  ec.dissipation_coeff = cfg.get_double("dissipation", 0.01);
  ec.excision_safety = cfg.get_double("excision_safety", 1.02);
  ec.snapshot_every = cfg.get_int("snapshot_every", 0);
  ec.stop.t_end = cfg.get_double("t_end", 0.8);
  ec.stop.max_gradient = cfg.get_double("max_gradient", 1e6);
  ec.stop.min_discriminant_floor = cfg.get_double("min_discriminant_floor", 1e-6);
  ec.stop.dt_floor = cfg.get_double("dt_floor", 1e-12);
  const double bump_amp = cfg.get_double("bump_amplitude", 0.0);
  const double bump_width = cfg.get_double("bump_width", 0.2);
  const bool want_fit = cfg.get_int("fit", 0) != 0;
  const double fit_lo = cfg.get_double("fit_lo", 0.5);
  const double fit_hi = cfg.get_double("fit_hi", 0.95);
  ec.validate();
  if (!(lo < hi) || n < 8) throw ConfigError("grid needs lo < hi and n >= 8");
  const Grid1D grid(lo, hi, n);

  const bool sphere = family == "sphere-plus" || family == "sphere-minus";
  if (membrane && sphere && bump_amp == 0.0) {
    // Lightlike background: check the exact solution on the grid instead.
    const BackgroundDiagnosis d =
        diagnose_exact_background(ClosedFormSolution(family_from_string(family), T), grid, 0.0, 1e-3);
    emit(out, {{"command", "evolve"},
               {"mode", "background-diagnosis"},
               {"termination", "degenerate-by-construction"},
               {"residual", to_json(d.residual)},
               {"max_abs_discriminant", d.max_abs_discriminant}});
    return kExitOk;
  }

  const EvolutionState init = initial_state(family, ec.equation, T, k, grid, bump_amp, bump_width);
  const EvolutionResult r = evolve(init, ec);

  const std::string diag_path = resolve_output(cfg.find_string("diagnostics").value_or("diagnostics.csv"));
  const std::string snap_path = resolve_output(cfg.find_string("snapshots").value_or("snapshots.csv"));
  {
    std::ofstream f = open_output(diag_path);
    write_diagnostics_csv(f, r.diagnostics);
  }
  {
    std::ofstream f = open_output(snap_path);
    write_snapshots_csv(f, r.snapshots);
  }

  json j{{"command", "evolve"},
         {"equation", eq_name},
         {"family", family},
         {"termination", to_string(r.termination)},
         {"message", r.message},
         {"steps", r.steps},
         {"t_final", r.final_state.t},
         {"active_nodes", r.final_state.active_nodes()},
         {"min_discriminant", r.final_state.min_discriminant},
         {"diagnostics_rows", r.diagnostics.size()},
         {"diagnostics", diag_path},
         {"snapshots", snap_path}};
  if (want_fit) {
    try {
      const BlowupFit fit = fit_blowup_rate(r.diagnostics, T, {fit_lo, fit_hi});
      j["fit"] = {{"exponent", fit.fitted_exponent},
                  {"amplitude", fit.fitted_amplitude},
                  {"r_squared", fit.fit.r_squared},
                  {"n_points", fit.fit.n_points},
                  {"window", {fit_lo, fit_hi}}};
    } catch (const Error& e) {
      j["fit"] = nullptr;
      j["fit_reason"] = e.what();
    }
  }
  emit(out, j);
  return kExitOk;
}

// ---- stability ----------------------------------------------------------------

struct StabilityArgs {
  double eps = 1e-6;
  std::string output;
};

int cmd_stability(const StabilityArgs& a, std::ostream& out) {
  const ModeReport m = solve_mode_quadratic();
  double c_rr = 0.0, c_tr = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double rho = i / 1001.0;
    for (int sign : {1, -1}) {
      const BaseProfile b = branch_profile(sign);
      const LinearizedCoefficients c = linearized_coefficients(b.phi(rho), b.dphi(rho), b.d2phi(rho), rho);
      c_rr = std::max(c_rr, std::abs(c.c_rr));
      c_tr = std::max(c_tr, std::abs(c.c_tr));
    }
  }
  std::vector<double> rho;
  for (int i = 0; i <= 80; ++i) rho.push_back(0.1 + 0.01 * i);
  const auto check = [&](const BaseProfile& base, double nu) {
    const LinearizationCheck c = directional_linearization_check(base, bump_direction(0.5, 0.15, nu), a.eps, rho);
    return json{{"max_relative_mismatch", c.max_relative_mismatch},
                {"max_abs_difference", c.max_abs_difference},
                {"worst_rho", c.worst_rho},
                {"printed", c.printed_at_worst},
                {"finite_difference", c.finite_diff_at_worst}};
  };
  json probes = json::array();
  for (long nu : {m.roots[0], m.roots[1], 2L}) {
    double worst = 0.0;
    for (const ModeSample& s : mode_growth_probe(static_cast<double>(nu), 0.0, 2.0, 21, 1.0)) {
      worst = std::max(worst, std::abs(s.residual));
    }
    probes.push_back({{"nu", nu}, {"max_abs_residual", worst}});
  }
  emit(out,
       {{"command", "stability"},
        {"mode_report", to_json(m)},
        {"branch_coefficients", {{"max_abs_c_rhorho", c_rr}, {"max_abs_c_taurho", c_tr}}},
        {"linearization",
         {{"zero_base", check(zero_profile(), 0.0)},
          {"branch_base_steady_direction", check(branch_profile(1), 0.0)},
          {"branch_base_mode_direction", check(branch_profile(1), 1.0)}}},
        {"mode_probes", probes}},
       a.output);
  return kExitOk;
}

// ---- scaling ------------------------------------------------------------------

struct ScalingArgs {
  std::vector<double> lambdas{0.5, 1.0, 2.0, 4.0};
  std::string weight = "x-weight", field = "sin-exp", output;
  double t = 0.0, L = 1.0;
  int cells = 400;
};

int cmd_scaling(const ScalingArgs& a, std::ostream& out) {
  FieldGradient f;
  if (a.field == "sin-exp") {
    f = [](double t, double x) { return std::pair{-std::sin(x) * std::exp(-t), std::cos(x) * std::exp(-t)}; };
  } else if (a.field == "gauss") {
    f = [](double t, double x) {
      const double g = std::exp(-x * x);
      return std::pair{g, -2.0 * x * g * (1.0 + t)};
    };
  } else {
    throw DomainError("--field must be sin-exp or gauss");
  }
  const ScalingMeasurement m = measure_scaling_exponent(f, a.lambdas, weight_from_string(a.weight), a.t, a.L, a.cells);
  json j = to_json(m);
  j["command"] = "scaling";
  j["field"] = a.field;
  emit(out, j, a.output);
  return kExitOk;
}

// ---- audit --------------------------------------------------------------------

int cmd_audit(const std::string& output, std::ostream& out) {
  const AuditReport r = run_audit();
  emit(out, to_json(r), output);
  return r.as_expected() ? kExitOk : kExitToleranceFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero mean curvature blow-up toolkit", "zmc"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Residual sweeps of the explicit solution families");
  verify->add_option("--equation", va.equation, "born-infeld | membrane | spacelike | divergence-form | eikonal")->required();
  verify->add_option("--family", va.family, "log | sphere | sphere-plus | sphere-minus | log-claimed | arctan | constant")
      ->required();
  verify->add_option("--k", va.k, "family parameter k")->capture_default_str();
  verify->add_option("--T", va.T, "blow-up time T")->capture_default_str();
  verify->add_option("--samples-per-axis", va.per_axis, "sampling density")->capture_default_str();
  verify->add_option("--output", va.output, "also write the JSON report here");

  ProfileArgs pa;
  auto* profile = app.add_subcommand("profile", "Shoot the self-similar profile equation or check the sphere branch");
  profile->add_option("--a", pa.a, "phi(0)");
  profile->add_option("--rho-max", pa.rho_max)->capture_default_str();
  profile->add_option("--drho", pa.drho)->capture_default_str();
  profile->add_option("--tol", pa.tol, "step-doubling tolerance, 0 for fixed steps")->capture_default_str();
  profile->add_option("--eps-deg", pa.eps_deg, "degeneracy threshold")->capture_default_str();
  profile->add_option("--branch", pa.branch, "plus | minus: verify phi = +-sqrt(1 - rho^2) instead of shooting");
  profile->add_option("--samples", pa.samples, "branch samples")->capture_default_str();
  profile->add_option("--output", pa.output, "CSV path")->capture_default_str();

  SteadyArgs sa;
  auto* steady = app.add_subcommand("steady", "Integrate a steady similarity ODE and compare with closed forms");
  steady->add_option("--equation", sa.equation, "born-infeld | spacelike")->capture_default_str();
  steady->add_option("--k", sa.k)->capture_default_str();
  steady->add_option("--rho-end", sa.rho_end);
  steady->add_option("--drho", sa.drho)->capture_default_str();
  steady->add_option("--output", sa.output, "CSV path")->capture_default_str();

  EvolveArgs ea;
  auto* evolve_cmd = app.add_subcommand("evolve", "Method-of-lines evolution with cone excision");
  evolve_cmd->add_option("--config", ea.config, "key=value run configuration");
  evolve_cmd->add_option("--set", ea.overrides, "override a config key (key=value); repeatable");

  StabilityArgs sta;
  auto* stability = app.add_subcommand("stability", "Mode quadratic and linearization checks");
  stability->add_option("--eps", sta.eps)->capture_default_str();
  stability->add_option("--output", sta.output);

  ScalingArgs sca;
  auto* scaling = app.add_subcommand("scaling", "Measure the energy scaling exponent");
  scaling->add_option("--lambdas", sca.lambdas)->delimiter(',')->capture_default_str();
  scaling->add_option("--weight", sca.weight, "x-weight | r-weight | unweighted")->capture_default_str();
  scaling->add_option("--field", sca.field, "sin-exp | gauss")->capture_default_str();
  scaling->add_option("--t", sca.t)->capture_default_str();
  scaling->add_option("--L", sca.L)->capture_default_str();
  scaling->add_option("--cells", sca.cells)->capture_default_str();
  scaling->add_option("--output", sca.output);

  std::string audit_output;
  auto* audit = app.add_subcommand("audit", "Check the published quantitative claims");
  audit->add_option("--output", audit_output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(va, out);
    if (profile->parsed()) return cmd_profile(pa, out);
    if (steady->parsed()) return cmd_steady(sa, out);
    if (evolve_cmd->parsed()) return cmd_evolve(ea, out);
    if (stability->parsed()) return cmd_stability(sta, out);
    if (scaling->parsed()) return cmd_scaling(sca, out);
    if (audit->parsed()) return cmd_audit(audit_output, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace zmc::cli
