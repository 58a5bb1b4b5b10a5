#include "zmc/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "zmc/conserved.hpp"
#include "zmc/errors.hpp"

namespace zmc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMinActiveNodes = 6;

bool on_axis(const EvolutionConfig& c) {
  return c.equation == EvolutionEquation::RadialMembrane && c.layout == RadialLayout::HalfLine;
}

std::string where(const Grid1D& grid, int i) {
  std::ostringstream s;
  s.precision(10);
  s << "node " << i << " (x=" << grid.node(i) << ")";
  return s.str();
}

// Fills ext with f[lo..hi], preceded by two parity ghosts when `ghosts`.
void extend(const std::vector<double>& f, int lo, int hi, bool ghosts, double parity, std::vector<double>& ext) {
  const int g = ghosts ? 2 : 0;
  ext.resize(hi - lo + 1 + g);
  if (ghosts) {
    ext[0] = parity * f[lo + 2];
    ext[1] = parity * f[lo + 1];
  }
  std::copy(f.begin() + lo, f.begin() + hi + 1, ext.begin() + g);
}

double fourth_difference(const std::vector<double>& f, int j) {
  return f[j - 2] - 4.0 * f[j - 1] + 6.0 * f[j] - 4.0 * f[j + 1] + f[j + 2];
}

// Rates on the active range of (p, q); u only enters through p.
Rates rates(const EvolutionConfig& config, const Grid1D& grid, int lo, int hi, const std::vector<double>& p,
            const std::vector<double>& q) {
  const bool axis = on_axis(config);
  const bool membrane = config.equation == EvolutionEquation::RadialMembrane;
  const int m = hi - lo + 1;
  const int g = axis ? 2 : 0;
  const double h = grid.spacing();
  if (m + g < 4) throw BoundaryError("active range too small for the derivative stencil");

  std::vector<double> pe, qe;
  extend(p, lo, hi, axis, 1.0, pe);
  extend(q, lo, hi, axis, -1.0, qe);
  std::vector<double> dp(pe.size()), dq(qe.size());
  first_derivative(pe, h, dp, EdgeClosure::ThirdOrder);
  first_derivative(qe, h, dq, EdgeClosure::ThirdOrder);

  Rates r;
  r.u.resize(m);
  r.p.resize(m);
  r.q.resize(m);
  const double sigma = config.dissipation_coeff;
  const int ext_size = m + g;
  for (int k = 0; k < m; ++k) {
    const int i = lo + k;
    const int j = g + k;
    const double P = p[i], Q = q[i];
    const double Dp = dp[j], Dq = dq[j];
    double num = (1.0 - P * P) * Dq + 2.0 * P * Q * Dp;
    if (membrane) {
      const double x = grid.node(i);
      const double q_over_r = std::abs(x) < 1e-12 * h ? Dq : Q / x;
      num += q_over_r * (1.0 - P * P + Q * Q);
    }
    double rp = num / (1.0 + Q * Q);
    double rq = Dp;
    if (sigma > 0.0 && j >= 2 && j + 2 < ext_size) {
      rp -= sigma / 16.0 * fourth_difference(pe, j) / h;
      rq -= sigma / 16.0 * fourth_difference(qe, j) / h;
    }
    if (!std::isfinite(rp) || !std::isfinite(rq) || !std::isfinite(P)) {
      throw NonFiniteError("non-finite rate at " + where(grid, i));
    }
    r.u[k] = P;
    r.p[k] = rp;
    r.q[k] = rq;
  }
  return r;
}

double edge_flux(const EvolutionConfig& config, const Grid1D& grid, int i, const std::vector<double>& p,
                 const std::vector<double>& q) {
  const double D = 1.0 - p[i] * p[i] + q[i] * q[i];
  if (!(D > 0.0)) throw DegeneracyError("discriminant non-positive at " + where(grid, i));
  return momentum_weight(config, grid.node(i)) * q[i] / std::sqrt(D);
}

double weighted_density(const EvolutionConfig& config, const EvolutionState& s, int i) {
  return momentum_weight(config, s.grid.node(i)) * momentum_density(s.p[i], s.q[i]);
}

double momentum_of(const EvolutionConfig& config, const EvolutionState& s) {
  const WeightKind w = config.equation == EvolutionEquation::BornInfeld ? WeightKind::Unweighted : WeightKind::RWeight;
  return momentum_integral(s, w);
}

double origin_value(const EvolutionConfig& config, const EvolutionState& s) {
  const Grid1D& grid = s.grid;
  const double h = grid.spacing();
  if (config.equation == EvolutionEquation::RadialMembrane) {
    if (on_axis(config)) return s.q[1] / h;
    const int i = static_cast<int>(std::lround(-grid.lo() / h));
    if (i - 1 < s.lo || i + 1 > s.hi) return kNaN;
    return (s.q[i + 1] - s.q[i - 1]) / (2.0 * h);
  }
  const double xl = grid.node(s.lo), xr = grid.node(s.hi);
  if (0.0 < xl || 0.0 > xr) return kNaN;
  const int i = std::clamp(static_cast<int>(std::floor(-grid.lo() / h)), s.lo, s.hi - 1);
  const double w = (0.0 - grid.node(i)) / h;
  return (1.0 - w) * s.q[i] + w * s.q[i + 1];
}

Snapshot snapshot_of(const EvolutionState& s) {
  Snapshot snap;
  snap.t = s.t;
  for (int i = s.lo; i <= s.hi; ++i) {
    snap.x.push_back(s.grid.node(i));
    snap.u.push_back(s.u[i]);
    snap.p.push_back(s.p[i]);
    snap.q.push_back(s.q[i]);
  }
  return snap;
}

}  // namespace

void EvolutionConfig::validate() const {
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw ConfigError("cfl_safety must lie in (0, 1]");
  if (!(dissipation_coeff >= 0.0)) throw ConfigError("dissipation must be >= 0");
  if (!(excision_safety >= 0.0)) throw ConfigError("excision_safety must be >= 0");
  if (!(stop.dt_floor > 0.0)) throw ConfigError("dt_floor must be > 0");
  if (!(stop.max_gradient > 0.0)) throw ConfigError("max_gradient must be > 0");
  if (!std::isfinite(stop.t_end)) throw ConfigError("t_end must be finite");
  if (snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
}

void EvolutionState::refresh_min_discriminant() {
  double m = std::numeric_limits<double>::infinity();
  for (int i = lo; i <= hi; ++i) m = std::min(m, 1.0 - p[i] * p[i] + q[i] * q[i]);
  min_discriminant = m;
}

EvolutionState make_state(const Grid1D& grid, double t, std::vector<double> u, std::vector<double> p,
                          std::vector<double> q) {
  const size_t n = grid.num_nodes();
  if (u.size() != n || p.size() != n || q.size() != n) throw ArityError("u, p, q must have one value per grid node");
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(u[i]) || !std::isfinite(p[i]) || !std::isfinite(q[i])) {
      throw NonFiniteError("initial data not finite at " + where(grid, static_cast<int>(i)));
    }
  }
  const double h = grid.spacing();
  double m3 = 0.0, umax = 0.0;
  for (size_t i = 2; i + 2 < n; ++i) {
    m3 = std::max(m3, std::abs(u[i + 2] - 2.0 * u[i + 1] + 2.0 * u[i - 1] - u[i - 2]) / (2.0 * h * h * h));
  }
  for (double v : u) umax = std::max(umax, std::abs(v));
  const double slack = 1e-12 * (1.0 + umax) / h;
  for (size_t i = 1; i + 1 < n; ++i) {
    const double du = (u[i + 1] - u[i - 1]) / (2.0 * h);
    if (std::abs(q[i] - du) > 10.0 * h * h * m3 + slack) {
      throw DomainError("q is not the x-derivative of u at " + where(grid, static_cast<int>(i)));
    }
  }
  EvolutionState s{grid, t, std::move(u), std::move(p), std::move(q)};
  s.lo = 0;
  s.hi = grid.cells();
  s.x_left = grid.lo();
  s.x_right = grid.hi();
  s.refresh_min_discriminant();
  return s;
}

EvolutionState state_from_closed_form(const ClosedFormSolution& sol, const Grid1D& grid, double t) {
  const int n = grid.num_nodes();
  std::vector<double> u(n), p(n), q(n);
  for (int i = 0; i < n; ++i) {
    const Jet2 j = evaluate_jet(sol, {t, grid.node(i)});
    u[i] = j.value;
    p[i] = j.d0;
    q[i] = j.d1;
  }
  return make_state(grid, t, std::move(u), std::move(p), std::move(q));
}

CharacteristicSpeeds characteristic_speeds(double p, double q) {
  const double D = 1.0 - p * p + q * q;
  if (D < 0.0) throw DegeneracyError("characteristic speeds undefined: 1 - p^2 + q^2 < 0");
  const double s = std::sqrt(D);
  const double a = 1.0 + q * q;
  return {(-p * q + s) / a, (-p * q - s) / a};
}

Rates rhs(const EvolutionConfig& config, const EvolutionState& state) {
  return rates(config, state.grid, state.lo, state.hi, state.p, state.q);
}

double stable_dt(const EvolutionConfig& config, const EvolutionState& state) {
  double vmax = 0.0;
  for (int i = state.lo; i <= state.hi; ++i) {
    const CharacteristicSpeeds c = characteristic_speeds(state.p[i], state.q[i]);
    vmax = std::max({vmax, std::abs(c.plus), std::abs(c.minus)});
  }
  if (vmax == 0.0) return std::numeric_limits<double>::infinity();
  return config.cfl_safety * state.grid.spacing() / vmax;
}

double momentum_weight(const EvolutionConfig& config, double x) {
  return config.equation == EvolutionEquation::RadialMembrane ? std::abs(x) : 1.0;
}

StepOutcome step(const EvolutionConfig& config, const EvolutionState& state, double dt) {
  if (!(dt > 0.0)) throw DomainError("step requires dt > 0");
  const Grid1D& grid = state.grid;
  const int lo = state.lo, hi = state.hi, m = hi - lo + 1;

  StepOutcome out{state};
  std::vector<double> pu = state.u, pp = state.p, pq = state.q;
  Rates acc{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  const double stage_dt[4] = {0.0, 0.5 * dt, 0.5 * dt, dt};
  const double weight[4] = {1.0, 2.0, 2.0, 1.0};
  Rates k;
  for (int s = 0; s < 4; ++s) {
    if (s > 0) {
      for (int c = 0; c < m; ++c) {
        const int i = lo + c;
        pu[i] = state.u[i] + stage_dt[s] * k.u[c];
        pp[i] = state.p[i] + stage_dt[s] * k.p[c];
        pq[i] = state.q[i] + stage_dt[s] * k.q[c];
      }
    }
    out.flux_left += weight[s] * dt / 6.0 * edge_flux(config, grid, lo, pp, pq);
    out.flux_right += weight[s] * dt / 6.0 * edge_flux(config, grid, hi, pp, pq);
    k = rates(config, grid, lo, hi, pp, pq);
    for (int c = 0; c < m; ++c) {
      acc.u[c] += weight[s] * k.u[c];
      acc.p[c] += weight[s] * k.p[c];
      acc.q[c] += weight[s] * k.q[c];
    }
  }
  if (on_axis(config)) out.flux_left = 0.0;

  EvolutionState& next = out.state;
  for (int c = 0; c < m; ++c) {
    const int i = lo + c;
    next.u[i] = state.u[i] + dt / 6.0 * acc.u[c];
    next.p[i] = state.p[i] + dt / 6.0 * acc.p[c];
    next.q[i] = state.q[i] + dt / 6.0 * acc.q[c];
    if (!std::isfinite(next.u[i]) || !std::isfinite(next.p[i]) || !std::isfinite(next.q[i])) {
      throw NonFiniteError("non-finite state after step at " + where(grid, i));
    }
  }
  next.t = state.t + dt;

  if (config.excision_safety > 0.0) {
    // Edge speeds from the start-of-step state.
    double left = 0.0, right = 0.0;
    for (int c = 0; c < 3 && c < m; ++c) {
      left = std::max(left, characteristic_speeds(state.p[lo + c], state.q[lo + c]).plus);
      right = std::max(right, -characteristic_speeds(state.p[hi - c], state.q[hi - c]).minus);
    }
    if (!on_axis(config)) next.x_left += config.excision_safety * left * dt;
    next.x_right -= config.excision_safety * right * dt;
    const double tiny = 1e-12 * grid.spacing();
    const double h = grid.spacing();
    while (next.hi - next.lo + 1 > 2 && grid.node(next.lo) < next.x_left - tiny) {
      out.removed_momentum +=
          0.5 * h * (weighted_density(config, next, next.lo) + weighted_density(config, next, next.lo + 1));
      ++next.lo;
    }
    while (next.hi - next.lo + 1 > 2 && grid.node(next.hi) > next.x_right + tiny) {
      out.removed_momentum +=
          0.5 * h * (weighted_density(config, next, next.hi) + weighted_density(config, next, next.hi - 1));
      --next.hi;
    }
  }
  next.refresh_min_discriminant();
  out.dt = dt;
  return out;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::ReachedEnd: return "reached-end";
    case Termination::MaxGradient: return "max-gradient";
    case Termination::DegeneracyFloor: return "degeneracy-floor";
    case Termination::StepFloor: return "step-floor";
    case Termination::DomainCollapsed: return "domain-collapsed";
    case Termination::NonFinite: return "non-finite";
  }
  return "unknown";
}

EvolutionResult evolve(const EvolutionState& initial, const EvolutionConfig& config) {
  config.validate();
  if (on_axis(config)) {
    if (initial.grid.lo() != 0.0) throw ConfigError("half-line membrane runs need a grid starting at r = 0");
    if (initial.lo != 0) throw ConfigError("half-line membrane runs must keep the axis node");
    if (std::abs(initial.q[0]) > 1e-12) throw RegularityError("u_r must vanish at r = 0");
  }

  EvolutionResult res(initial);
  EvolutionState& s = res.final_state;
  double removed = 0.0, flux = 0.0;

  const auto record = [&]() {
    double sup_q = 0.0;
    for (int i = s.lo; i <= s.hi; ++i) sup_q = std::max(sup_q, std::abs(s.q[i]));
    double mom = kNaN;
    if (s.min_discriminant > 0.0) mom = momentum_of(config, s);
    res.diagnostics.push_back({s.t, sup_q, origin_value(config, s), s.min_discriminant, mom, mom + removed - flux});
  };

  record();
  res.snapshots.push_back(snapshot_of(s));
  const double t_end = config.stop.t_end;
  const double t_tol = 1e-13 * std::max(1.0, std::abs(t_end));

  while (true) {
    if (s.t >= t_end - t_tol) {
      res.termination = Termination::ReachedEnd;
      break;
    }
    if (!(s.min_discriminant > config.stop.min_discriminant_floor)) {
      res.termination = Termination::DegeneracyFloor;
      break;
    }
    if (res.diagnostics.back().sup_q > config.stop.max_gradient) {
      res.termination = Termination::MaxGradient;
      break;
    }
    if (s.active_nodes() < kMinActiveNodes) {
      res.termination = Termination::DomainCollapsed;
      break;
    }
    double dt = stable_dt(config, s);
    if (dt < config.stop.dt_floor) {
      res.termination = Termination::StepFloor;
      break;
    }
    dt = std::min(dt, t_end - s.t);
    try {
      StepOutcome o = step(config, s, dt);
      s = std::move(o.state);
      removed += o.removed_momentum;
      flux += o.flux_right - o.flux_left;
    } catch (const NonFiniteError& e) {
      res.termination = Termination::NonFinite;
      res.message = e.what();
      break;
    } catch (const DegeneracyError& e) {
      res.termination = Termination::DegeneracyFloor;
      res.message = e.what();
      break;
    }
    ++res.steps;
    record();
    if (config.snapshot_every > 0 && res.steps % config.snapshot_every == 0) res.snapshots.push_back(snapshot_of(s));
  }
  if (res.snapshots.back().t != s.t) res.snapshots.push_back(snapshot_of(s));
  if (res.message.empty()) res.message = to_string(res.termination);
  return res;
}

namespace {

void put(std::ostream& out, double v, bool last) {
  char buf[32];
  if (std::isfinite(v)) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  }
  out << (last ? '\n' : ',');
}

}  // namespace

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticRow>& rows) {
  out << "t,sup_q,q_at_origin,min_discriminant,momentum_integral,momentum_corrected\n";
  for (const DiagnosticRow& r : rows) {
    put(out, r.t, false);
    put(out, r.sup_q, false);
    put(out, r.q_at_origin, false);
    put(out, r.min_discriminant, false);
    put(out, r.momentum_integral, false);
    put(out, r.momentum_corrected, true);
  }
}

void write_snapshots_csv(std::ostream& out, const std::vector<Snapshot>& snapshots) {
  out << "t,x,u,p,q\n";
  for (const Snapshot& s : snapshots) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      put(out, s.t, false);
      put(out, s.x[i], false);
      put(out, s.u[i], false);
      put(out, s.p[i], false);
      put(out, s.q[i], true);
    }
  }
}

BlowupFit fit_blowup_rate(const std::vector<double>& t, const std::vector<double>& g, double T,
                          std::pair<double, double> window) {
  if (t.size() != g.size()) throw ArityError("time and gradient series differ in length");
  std::vector<double> inv_gap, mag;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window.first || t[i] > window.second || !std::isfinite(g[i])) continue;
    if (!(t[i] < T)) throw DomainError("blow-up fit requires t < T for every sample");
    inv_gap.push_back(1.0 / (T - t[i]));
    mag.push_back(std::abs(g[i]));
  }
  if (inv_gap.empty()) throw ArityError("no samples inside the fit window");
  BlowupFit fit;
  fit.fit = log_log_fit(inv_gap, mag);
  fit.fitted_exponent = fit.fit.slope;
  fit.fitted_amplitude = std::exp(fit.fit.intercept);
  fit.window = window;
  return fit;
}

BlowupFit fit_blowup_rate(const std::vector<DiagnosticRow>& rows, double T, std::pair<double, double> window) {
  std::vector<double> t, g;
  for (const DiagnosticRow& r : rows) {
    t.push_back(r.t);
    g.push_back(r.q_at_origin);
  }
  return fit_blowup_rate(t, g, T, window);
}

BackgroundDiagnosis diagnose_exact_background(const ClosedFormSolution& sol, const Grid1D& grid, double t,
                                              double dt) {
  if (!is_membrane(sol.family())) throw DomainError("background diagnosis applies to the sphere families");
  if (!(dt > 0.0)) throw DomainError("background diagnosis requires dt > 0");
  const SampledField field = SampledField::sample(grid, t - dt, dt, 3, [&](double tt, double x) {
    return evaluate_jet(sol, {tt, x}).value;
  });
  BackgroundDiagnosis d;
  d.residual.equation = "membrane-discrete";
  for (int i = 1; i + 1 < grid.num_nodes(); ++i) {
    const double x = grid.node(i);
    const Jet2 jet = central_diff_jet2(field, i, 1);
    const double r = std::abs(x) < 1e-12 * grid.spacing() ? residual_at_axis(jet, 1e-9)
                                                         : residual_at(EquationId::RadialMembrane, jet, {t, x});
    d.residual.add({t, x}, r);
    const Jet2 exact = evaluate_jet(sol, {t, x});
    d.max_abs_discriminant =
        std::max(d.max_abs_discriminant, std::abs(1.0 - exact.d0 * exact.d0 + exact.d1 * exact.d1));
  }
  d.residual.finish();
  return d;
}

}  // namespace zmc
