#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "zmc/closedform.hpp"
#include "zmc/jet.hpp"
#include "zmc/numerics.hpp"

namespace zmc {

enum class EquationId {
  BornInfeld,      // u_tt (1 + u_x^2) - u_xx (1 - u_t^2) - 2 u_t u_x u_tx
  RadialMembrane,  // seven-term radial membrane operator, r > 0
  SpacelikeZmc,    // u_xx (1 - u_y^2) + u_yy (1 - u_x^2) + 2 u_x u_y u_xy
  DivergenceForm,  // Euler-Lagrange form of the area action, one space dimension
  Eikonal,         // 1 - u_t^2 + u_spatial^2
};

std::string to_string(EquationId eq);
EquationId equation_from_string(const std::string& name);

inline constexpr double kDegeneracyEps = 1e-10;

struct ResidualReport {
  std::string equation;
  long n_points = 0;
  double max_abs = 0.0;
  double rms = 0.0;
  Point worst_point;
  std::vector<std::pair<Point, double>> per_point;

  // Folds one sample into the aggregates.
  void add(Point p, double residual, bool keep_point = false);
  // Finalises rms from the accumulated sum of squares.
  void finish();

private:
  double sum_squares_ = 0.0;
};

nlohmann::json to_json(const ResidualReport& report);

// Expanded-form residual (left side minus right side) from a 2-jet. For
// RadialMembrane, p.b is r and must be nonzero. DivergenceForm is not
// available here; see divergence_form_residual.
template <typename Real>
Real residual_at(EquationId eq, const BasicJet2<Real>& jet, Point p);

inline double residual_at(EquationId eq, const Jet2& jet, Point p) { return residual_at<double>(eq, jet, p); }

// r -> 0 limit of the radial membrane residual for an even field:
// u_tt - 2 u_rr (1 - u_t^2). Throws RegularityError when |u_r| > tol.
template <typename Real>
Real residual_at_axis(const BasicJet2<Real>& jet, double tol = 1e-12);

inline double residual_at_axis(const Jet2& jet, double tol = 1e-12) { return residual_at_axis<double>(jet, tol); }

// d_t(u_t / sqrt(D)) - d_x(u_x / sqrt(D)) with D = 1 - u_t^2 + u_x^2,
// expanded by the chain rule. Throws DegeneracyError when D <= eps_deg.
double divergence_form_residual(const Jet2& jet, double eps_deg = kDegeneracyEps);

// Same operator on a sampled field: the fluxes u_t/sqrt(D) and u_x/sqrt(D)
// are formed from central differences at the neighbouring nodes and levels,
// then differenced again. Needs two nodes/levels of clearance.
double divergence_form_residual(const SampledField& field, int i, int level,
                                double eps_deg = kDegeneracyEps);

// Sampling plans for sweep_residual.
struct RectangleSampler {
  double a_lo, a_hi, b_lo, b_hi;
  int n_a, n_b;
};

// t in [t_lo, T - margin], x in [-(T - t - margin), T - t - margin].
struct LightconeSampler {
  double T;
  double margin;
  int n_t, n_x;
  double t_lo = 0.0;
};

// t in [t_lo, t_hi], r = rho (T - t) with rho in [0, rho_max]. Points on the
// axis use the axis limit of the radial residual.
struct BackwardConeSampler {
  double T;
  double t_lo, t_hi;
  double rho_max;
  int n_t, n_rho;
};

using Sampler = std::variant<RectangleSampler, LightconeSampler, BackwardConeSampler>;

std::vector<Point> sample_points(const Sampler& sampler);

// Evaluates residual_at on every sample. Jets and residuals are evaluated in
// extended precision; near the lightcone the individual terms reach 1e8 and
// double rounding alone would exceed the verification tolerances.
ResidualReport sweep_residual(EquationId eq, const ClosedFormSolution& sol, const Sampler& sampler,
                              bool keep_per_point = false);

}  // namespace zmc
