#include "zmc/conserved.hpp"

#include <algorithm>
#include <cmath>

#include "zmc/errors.hpp"

namespace zmc {

std::string to_string(WeightKind w) {
  switch (w) {
    case WeightKind::XWeight: return "x-weight";
    case WeightKind::RWeight: return "r-weight";
    case WeightKind::Unweighted: return "unweighted";
  }
  return "unknown";
}

WeightKind weight_from_string(const std::string& name) {
  if (name == "x-weight" || name == "x") return WeightKind::XWeight;
  if (name == "r-weight" || name == "r") return WeightKind::RWeight;
  if (name == "unweighted" || name == "none") return WeightKind::Unweighted;
  throw DomainError("unknown weight '" + name + "'");
}

double weight_at(WeightKind w, double x) {
  switch (w) {
    case WeightKind::XWeight: return x;
    case WeightKind::RWeight: return std::abs(x);
    case WeightKind::Unweighted: return 1.0;
  }
  return 1.0;
}

double momentum_density(double p, double q) {
  const double D = 1.0 - p * p + q * q;
  if (!(D > 0.0)) throw DegeneracyError("momentum density needs 1 - p^2 + q^2 > 0");
  return p / std::sqrt(D);
}

double momentum_integral(std::span<const double> x, std::span<const double> p, std::span<const double> q,
                         WeightKind weight) {
  if (x.size() != p.size() || x.size() != q.size()) throw ArityError("x, p, q differ in length");
  if (x.size() < 2) throw ArityError("momentum integral needs at least two nodes");
  std::vector<double> f(x.size());
  for (size_t i = 0; i < x.size(); ++i) f[i] = weight_at(weight, x[i]) * momentum_density(p[i], q[i]);
  return trapezoid_uniform(f, x[1] - x[0]);
}

double momentum_integral(const EvolutionState& s, WeightKind weight) {
  const int m = s.active_nodes();
  std::vector<double> x(m);
  for (int k = 0; k < m; ++k) x[k] = s.grid.node(s.lo + k);
  return momentum_integral(x, std::span(s.p).subspan(s.lo, m), std::span(s.q).subspan(s.lo, m), weight);
}

double quadratic_energy(std::span<const double> ut, std::span<const double> ux, const Grid1D& grid, WeightKind weight) {
  const size_t n = grid.num_nodes();
  if (ut.size() != n || ux.size() != n) throw ArityError("energy samples must match the grid");
  std::vector<double> f(n);
  for (size_t i = 0; i < n; ++i) f[i] = 0.5 * (ut[i] * ut[i] + ux[i] * ux[i]);
  return trapezoid_quadrature(f, grid, [weight](double x) { return weight_at(weight, x); });
}

EnergyReport energy_report(std::span<const double> ut, std::span<const double> ux, const Grid1D& grid,
                           WeightKind weight) {
  EnergyReport r;
  r.weight_kind = weight;
  r.quadratic_part = quadratic_energy(ut, ux, grid, weight);
  std::vector<double> f(ut.size());
  bool ok = true;
  for (size_t i = 0; i < f.size(); ++i) {
    const double D = 1.0 - ut[i] * ut[i] + ux[i] * ux[i];
    if (D < 0.0) {
      ok = false;
      break;
    }
    f[i] = std::sqrt(D);
  }
  if (ok) r.geometric_action = trapezoid_quadrature(f, grid, [weight](double x) { return weight_at(weight, x); });
  return r;
}

nlohmann::json to_json(const EnergyReport& r) {
  nlohmann::json j{{"quadratic_part", r.quadratic_part}, {"weight_kind", to_string(r.weight_kind)}};
  if (r.geometric_action) {
    j["geometric_action_density_integral"] = *r.geometric_action;
  } else {
    j["geometric_action_density_integral"] = nullptr;
    j["geometric_action_density_integral_reason"] = "discriminant negative on part of the domain";
  }
  return j;
}

ScalingMeasurement measure_scaling_exponent(const FieldGradient& field, const std::vector<double>& lambdas,
                                            WeightKind weight, double t, double L, int cells) {
  if (lambdas.size() < 3) throw ArityError("scaling measurement needs at least three lambda values");
  for (double l : lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("lambda values must be positive and finite");
  }
  std::vector<double> sorted = lambdas;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("lambda values must be distinct");
  }
  if (!(L > 0.0)) throw DomainError("scaling domain length must be positive");

  ScalingMeasurement m;
  m.lambda_values = lambdas;
  m.weight_kind = weight;
  for (double lam : lambdas) {
    // d/dt and d/dx of u(lam t, lam x) / lam are u_t and u_x at (lam t, lam x).
    const Grid1D grid(0.0, L / lam, cells);
    std::vector<double> ut(grid.num_nodes()), ux(grid.num_nodes());
    for (int i = 0; i < grid.num_nodes(); ++i) {
      const auto [a, b] = field(lam * t, lam * grid.node(i));
      ut[i] = a;
      ux[i] = b;
    }
    m.energies.push_back(quadratic_energy(ut, ux, grid, weight));
  }
  m.fit = log_log_fit(m.lambda_values, m.energies);
  m.measured_exponent = m.fit.slope;
  return m;
}

nlohmann::json to_json(const ScalingMeasurement& m) {
  return {{"lambda_values", m.lambda_values},
          {"energies", m.energies},
          {"measured_exponent", m.measured_exponent},
          {"fit", {{"slope", m.fit.slope}, {"intercept", m.fit.intercept}, {"r_squared", m.fit.r_squared},
                   {"n_points", m.fit.n_points}}},
          {"claimed_exponent", m.claimed_exponent},
          {"weight_kind", to_string(m.weight_kind)}};
}

}  // namespace zmc
