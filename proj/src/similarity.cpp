#include "zmc/similarity.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "zmc/errors.hpp"
#include "zmc/numerics.hpp"

namespace zmc {

namespace {

void check_map(const SimilarityMap& map) {
  if (!(map.T > 0.0)) throw DomainError("similarity map needs T > 0");
}

// Jet of w(tau, rho) = u(a, b) from the physical jet of u.
Jet2 unscaled_from_physical(const Jet2& u, double e_inv, double rho) {
  Jet2 v;
  v.value = u.value;
  v.d1 = e_inv * u.d1;
  v.d0 = e_inv * u.d0 - rho * v.d1;
  v.d11 = e_inv * e_inv * u.d11;
  v.d01 = e_inv * e_inv * u.d01 - v.d1 - rho * v.d11;
  v.d00 = e_inv * e_inv * u.d00 - v.d0 - 2.0 * rho * v.d1 - 2.0 * rho * v.d01 - rho * rho * v.d11;
  return v;
}

Jet2 physical_from_unscaled(const Jet2& v, double e, double rho) {
  Jet2 u;
  u.value = v.value;
  u.d0 = e * (v.d0 + rho * v.d1);
  u.d1 = e * v.d1;
  u.d00 = e * e * (v.d00 + v.d0 + 2.0 * rho * v.d1 + 2.0 * rho * v.d01 + rho * rho * v.d11);
  u.d11 = e * e * v.d11;
  u.d01 = e * e * (v.d01 + v.d1 + rho * v.d11);
  return u;
}

}  // namespace

Point to_similarity(const SimilarityMap& map, Point physical) {
  check_map(map);
  if (!(physical.a < map.T)) {
    throw DomainError(map.orientation == Orientation::TimeBased ? "similarity map requires t < T"
                                                                : "similarity map requires x < T");
  }
  const double gap = map.T - physical.a;
  return {-std::log(gap), physical.b / gap};
}

Point from_similarity(const SimilarityMap& map, Point similarity) {
  check_map(map);
  const double gap = std::exp(-similarity.a);
  return {map.T - gap, similarity.b * gap};
}

Jet2 transform_field_jet(const SimilarityMap& map, const Jet2& physical_jet, Point physical, Scaling scaling) {
  const Point s = to_similarity(map, physical);
  const double e_inv = map.T - physical.a;  // e^{-tau}
  const Jet2 w = unscaled_from_physical(physical_jet, e_inv, s.b);
  if (scaling == Scaling::None) return w;

  // v = e^tau w
  const double e = 1.0 / e_inv;
  Jet2 v;
  v.value = e * w.value;
  v.d0 = e * (w.value + w.d0);
  v.d1 = e * w.d1;
  v.d00 = e * (w.value + 2.0 * w.d0 + w.d00);
  v.d01 = e * (w.d1 + w.d01);
  v.d11 = e * w.d11;
  return v;
}

Jet2 physical_jet(const SimilarityMap& map, const Jet2& similarity_jet, Point similarity, Scaling scaling) {
  check_map(map);
  const double e = std::exp(similarity.a);
  const double rho = similarity.b;
  if (scaling == Scaling::None) return physical_from_unscaled(similarity_jet, e, rho);

  // w = e^{-tau} v
  const Jet2& v = similarity_jet;
  const double ei = 1.0 / e;
  Jet2 w;
  w.value = ei * v.value;
  w.d0 = ei * (v.d0 - v.value);
  w.d1 = ei * v.d1;
  w.d00 = ei * (v.d00 - 2.0 * v.d0 + v.value);
  w.d01 = ei * (v.d01 - v.d1);
  w.d11 = ei * v.d11;
  return physical_from_unscaled(w, e, rho);
}

SteadyClosedForm steady_ode_closed_form(SteadyOde id, double k, double rho) {
  switch (id) {
    case SteadyOde::BornInfeldSteady: {
      if (!(std::abs(rho) < 1.0)) throw DomainError("Born-Infeld steady solution requires |rho| < 1");
      const double v = k * std::log((1.0 + rho) / (1.0 - rho));
      return {v, v, true};
    }
    case SteadyOde::SpacelikeSteady:
      return {k * std::asinh(rho), k * std::atan(rho), false};
    case SteadyOde::MembraneSteady:
      throw DomainError("the membrane steady equation has no one-parameter closed-form family");
  }
  throw DomainError("unhandled steady equation");
}

double steady_ode_residual(SteadyOde id, double v, double dv, double d2v, double rho) {
  switch (id) {
    case SteadyOde::BornInfeldSteady: return (rho * rho - 1.0) * d2v + 2.0 * rho * dv;
    case SteadyOde::SpacelikeSteady: return (rho * rho + 1.0) * d2v + 2.0 * rho * dv;
    case SteadyOde::MembraneSteady: {
      if (rho == 0.0) throw SingularPointError("membrane steady residual is singular at rho = 0");
      return -(1.0 - rho * rho) * d2v - dv / rho - 2.0 * v * dv * dv + d2v * v * v + dv * v * v / rho +
             (rho * rho - 1.0) * dv * dv * dv / rho;
    }
  }
  throw DomainError("unhandled steady equation");
}

namespace {

double steady_second_derivative(SteadyOde id, double v, double dv, double rho) {
  switch (id) {
    case SteadyOde::BornInfeldSteady: return 2.0 * rho * dv / (1.0 - rho * rho);
    case SteadyOde::SpacelikeSteady: return -2.0 * rho * dv / (1.0 + rho * rho);
    case SteadyOde::MembraneSteady: {
      const double coeff = v * v - (1.0 - rho * rho);
      if (std::abs(coeff) <= 1e-14) throw DegeneracyError("membrane steady equation: 1 - rho^2 - v^2 = 0");
      const double rest = steady_ode_residual(id, v, dv, 0.0, rho);
      return -rest / coeff;
    }
  }
  return 0.0;
}

}  // namespace

SteadySolution steady_ode_integrate(SteadyOde id, double v0, double dv0, double rho0, double rho_end, double drho) {
  if (!(drho > 0.0)) throw DomainError("steady_ode_integrate requires drho > 0");
  if (!(rho_end > rho0)) throw DomainError("steady_ode_integrate integrates forward: rho_end > rho0");
  if (id == SteadyOde::BornInfeldSteady) {
    const double limit = 1.0 - 10.0 * drho;
    if (std::abs(rho0) > limit || std::abs(rho_end) > limit) {
      throw DomainError("Born-Infeld steady range must stay 10 drho away from |rho| = 1");
    }
  }
  if (id == SteadyOde::MembraneSteady && !(rho0 > 0.0)) {
    throw DomainError("membrane steady integration must start at rho > 0");
  }

  const long steps = std::max(1L, std::lround((rho_end - rho0) / drho));
  const double h = (rho_end - rho0) / static_cast<double>(steps);
  const Derivative f = [id](double rho, const StateVector& y) {
    return StateVector{y[1], steady_second_derivative(id, y[0], y[1], rho)};
  };

  SteadySolution out;
  out.rho.reserve(steps + 1);
  StateVector y{v0, dv0};
  out.rho.push_back(rho0);
  out.v.push_back(y[0]);
  out.dv.push_back(y[1]);
  for (long s = 0; s < steps; ++s) {
    const double rho = rho0 + s * h;
    y = rk4_step(y, f, rho, h);
    out.rho.push_back(rho0 + (s + 1) * h);
    out.v.push_back(y[0]);
    out.dv.push_back(y[1]);
  }
  return out;
}

void write_steady_csv(std::ostream& out, const SteadySolution& solution, SteadyOde id, double k) {
  out << "rho,v_numeric,v_closed_claimed,v_closed_corrected\n";
  char line[160];
  for (size_t i = 0; i < solution.rho.size(); ++i) {
    const SteadyClosedForm cf = steady_ode_closed_form(id, k, solution.rho[i]);
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", solution.rho[i], solution.v[i], cf.claimed,
                  cf.corrected);
    out << line;
  }
}

double transformed_equation_residual(TransformedEquation eq, const Jet2& j, Point similarity) {
  const double rho = similarity.b;
  const double V = j.value, Vt = j.d0, Vr = j.d1, Vtt = j.d00, Vtr = j.d01, Vrr = j.d11;
  switch (eq) {
    case TransformedEquation::BornInfeldSimilarity: {
      const double E = std::exp(2.0 * similarity.a);
      const double ut_like = Vt + rho * Vr;
      return Vtt - (1.0 - rho * rho) * Vrr + Vt + 2.0 * rho * Vr + 2.0 * rho * Vtr +
             E * Vr * Vr * (Vtt + Vt + 2.0 * rho * Vr + 2.0 * rho * Vtr + rho * rho * Vrr) +
             E * ut_like * ut_like * Vrr - 2.0 * E * Vr * ut_like * (Vr + rho * Vrr + Vtr);
    }
    case TransformedEquation::SpacelikeSimilarity: {
      const double E = std::exp(2.0 * similarity.a);
      const double ux_like = Vt + rho * Vr;
      return Vtt + (1.0 + rho * rho) * Vrr + Vt + 2.0 * rho * Vr + 2.0 * rho * Vtr -
             E * Vr * Vr * (Vtt + Vt + 2.0 * rho * Vr + 2.0 * rho * Vtr + rho * rho * Vrr) -
             E * ux_like * ux_like * Vrr + 2.0 * E * Vr * ux_like * (Vr + rho * Vrr + Vtr);
    }
    case TransformedEquation::MembraneSimilarity: {
      if (rho == 0.0) throw SingularPointError("membrane similarity equation is singular at rho = 0");
      const double w = Vt - V;
      return Vtt - Vt - (1.0 - rho * rho) * Vrr - Vr / rho + 2.0 * rho * Vtr + Vr * Vr * (Vtt + Vt - 2.0 * V) +
             Vrr * w * w - 2.0 * Vr * Vtr * w + Vr * w * w / rho + (rho * rho - 1.0) * Vr * Vr * Vr / rho;
    }
  }
  throw DomainError("unhandled transformed equation");
}

}  // namespace zmc
