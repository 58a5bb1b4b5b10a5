#include "zmc/residual.hpp"

#include <algorithm>
#include <cmath>

#include "zmc/errors.hpp"

namespace zmc {

std::string to_string(EquationId eq) {
  switch (eq) {
    case EquationId::BornInfeld: return "born-infeld";
    case EquationId::RadialMembrane: return "membrane";
    case EquationId::SpacelikeZmc: return "spacelike";
    case EquationId::DivergenceForm: return "divergence-form";
    case EquationId::Eikonal: return "eikonal";
  }
  return "unknown";
}

EquationId equation_from_string(const std::string& name) {
  if (name == "born-infeld") return EquationId::BornInfeld;
  if (name == "membrane") return EquationId::RadialMembrane;
  if (name == "spacelike") return EquationId::SpacelikeZmc;
  if (name == "divergence-form") return EquationId::DivergenceForm;
  if (name == "eikonal") return EquationId::Eikonal;
  throw DomainError("unknown equation '" + name + "'");
}

void ResidualReport::add(Point p, double residual, bool keep_point) {
  const double mag = std::abs(residual);
  if (n_points == 0 || mag > max_abs) {
    max_abs = mag;
    worst_point = p;
  }
  sum_squares_ += residual * residual;
  ++n_points;
  if (keep_point) per_point.emplace_back(p, residual);
}

void ResidualReport::finish() { rms = n_points > 0 ? std::sqrt(sum_squares_ / n_points) : 0.0; }

nlohmann::json to_json(const ResidualReport& report) {
  return {{"equation", report.equation},
          {"n_points", report.n_points},
          {"max_abs", report.max_abs},
          {"rms", report.rms},
          {"worst_point", {report.worst_point.a, report.worst_point.b}}};
}

template <typename Real>
Real residual_at(EquationId eq, const BasicJet2<Real>& j, Point p) {
  switch (eq) {
    case EquationId::BornInfeld:
      return j.d00 * (1 + j.d1 * j.d1) - j.d11 * (1 - j.d0 * j.d0) - 2 * j.d0 * j.d1 * j.d01;
    case EquationId::RadialMembrane: {
      if (p.b == 0.0) throw SingularPointError("radial membrane residual at r = 0; use residual_at_axis");
      const Real r = p.b;
      const Real ut = j.d0, ur = j.d1, utt = j.d00, utr = j.d01, urr = j.d11;
      return utt - urr - ur / r + utt * ur * ur + urr * ut * ut - 2 * ut * ur * utr + ur * ut * ut / r -
             ur * ur * ur / r;
    }
    case EquationId::SpacelikeZmc:
      return j.d00 * (1 - j.d1 * j.d1) + j.d11 * (1 - j.d0 * j.d0) + 2 * j.d0 * j.d1 * j.d01;
    case EquationId::Eikonal: return 1 - j.d0 * j.d0 + j.d1 * j.d1;
    case EquationId::DivergenceForm:
      throw DomainError("divergence-form residual needs divergence_form_residual");
  }
  throw DomainError("unhandled equation");
}

template double residual_at<double>(EquationId, const Jet2&, Point);
template long double residual_at<long double>(EquationId, const Jet2Ext&, Point);

template <typename Real>
Real residual_at_axis(const BasicJet2<Real>& j, double tol) {
  if (std::abs(static_cast<double>(j.d1)) > tol) {
    throw RegularityError("u_r must vanish on the axis for an even field");
  }
  return j.d00 - 2 * j.d11 * (1 - j.d0 * j.d0);
}

template double residual_at_axis<double>(const Jet2&, double);
template long double residual_at_axis<long double>(const Jet2Ext&, double);

double divergence_form_residual(const Jet2& j, double eps_deg) {
  const double p = j.d0, q = j.d1;
  const double D = 1.0 - p * p + q * q;
  if (!(D > eps_deg)) throw DegeneracyError("divergence form undefined: 1 - u_t^2 + u_x^2 <= eps");
  // d_t D / 2 and d_x D / 2
  const double Dt = -p * j.d00 + q * j.d01;
  const double Dx = -p * j.d01 + q * j.d11;
  const double s = std::sqrt(D);
  const double time_part = j.d00 / s - p * Dt / (D * s);
  const double space_part = j.d11 / s - q * Dx / (D * s);
  return time_part - space_part;
}

double divergence_form_residual(const SampledField& field, int i, int level, double eps_deg) {
  const int n = field.grid.num_nodes();
  if (i < 2 || i > n - 3 || level < 2 || level > field.levels - 3) {
    throw BoundaryError("discrete divergence form needs two nodes and levels of clearance");
  }
  const double h = field.grid.spacing();
  const double k = field.dt;
  const auto f = [&](int l, int m) { return field.at(l, m); };
  const auto time_flux = [&](int l, int m) {
    const double p = (f(l + 1, m) - f(l - 1, m)) / (2.0 * k);
    const double q = (f(l, m + 1) - f(l, m - 1)) / (2.0 * h);
    const double D = 1.0 - p * p + q * q;
    if (!(D > eps_deg)) throw DegeneracyError("discrete divergence form: discriminant <= eps");
    return std::pair{p / std::sqrt(D), q / std::sqrt(D)};
  };
  const double dt_flux = (time_flux(level + 1, i).first - time_flux(level - 1, i).first) / (2.0 * k);
  const double dx_flux = (time_flux(level, i + 1).second - time_flux(level, i - 1).second) / (2.0 * h);
  return dt_flux - dx_flux;
}

namespace {

double lerp(double lo, double hi, int i, int n) { return n > 1 ? lo + (hi - lo) * i / (n - 1) : lo; }

}  // namespace

std::vector<Point> sample_points(const Sampler& sampler) {
  std::vector<Point> pts;
  if (const auto* s = std::get_if<RectangleSampler>(&sampler)) {
    if (s->n_a < 1 || s->n_b < 1) throw ArityError("sampler needs at least one point per axis");
    for (int i = 0; i < s->n_a; ++i)
      for (int j = 0; j < s->n_b; ++j) pts.push_back({lerp(s->a_lo, s->a_hi, i, s->n_a), lerp(s->b_lo, s->b_hi, j, s->n_b)});
  } else if (const auto* s = std::get_if<LightconeSampler>(&sampler)) {
    if (s->n_t < 1 || s->n_x < 1) throw ArityError("sampler needs at least one point per axis");
    for (int i = 0; i < s->n_t; ++i) {
      const double t = lerp(s->t_lo, s->T - s->margin, i, s->n_t);
      const double half = std::max(0.0, s->T - t - s->margin);
      for (int j = 0; j < s->n_x; ++j) pts.push_back({t, lerp(-half, half, j, s->n_x)});
    }
  } else if (const auto* s = std::get_if<BackwardConeSampler>(&sampler)) {
    if (s->n_t < 1 || s->n_rho < 1) throw ArityError("sampler needs at least one point per axis");
    for (int i = 0; i < s->n_t; ++i) {
      const double t = lerp(s->t_lo, s->t_hi, i, s->n_t);
      for (int j = 0; j < s->n_rho; ++j) pts.push_back({t, lerp(0.0, s->rho_max, j, s->n_rho) * (s->T - t)});
    }
  }
  return pts;
}

ResidualReport sweep_residual(EquationId eq, const ClosedFormSolution& sol, const Sampler& sampler,
                              bool keep_per_point) {
  ResidualReport report;
  report.equation = to_string(eq);
  for (const Point& p : sample_points(sampler)) {
    const Jet2Ext jet = evaluate_jet<long double>(sol, p);
    long double r = 0.0L;
    if (eq == EquationId::DivergenceForm) {
      r = divergence_form_residual(jet.cast<double>());
    } else if (eq == EquationId::RadialMembrane && p.b == 0.0) {
      r = residual_at_axis(jet);
    } else {
      r = residual_at(eq, jet, p);
    }
    report.add(p, static_cast<double>(r), keep_per_point);
  }
  report.finish();
  return report;
}

}  // namespace zmc
