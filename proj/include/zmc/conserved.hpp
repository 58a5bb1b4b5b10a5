#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "zmc/evolution.hpp"
#include "zmc/numerics.hpp"

namespace zmc {

// XWeight multiplies by x, RWeight by |r|.
enum class WeightKind { XWeight, RWeight, Unweighted };

std::string to_string(WeightKind w);
WeightKind weight_from_string(const std::string& name);
double weight_at(WeightKind w, double x);

// p / sqrt(1 - p^2 + q^2). Throws DegeneracyError when the discriminant is
// not positive.
double momentum_density(double p, double q);

// Trapezoid rule of weight(x) * momentum_density over equally spaced nodes.
double momentum_integral(std::span<const double> x, std::span<const double> p, std::span<const double> q,
                         WeightKind weight = WeightKind::Unweighted);

// Same over the live nodes of an evolution state.
double momentum_integral(const EvolutionState& state, WeightKind weight = WeightKind::Unweighted);

// Trapezoid rule of (u_t^2 + u_x^2) / 2 * weight.
double quadratic_energy(std::span<const double> ut, std::span<const double> ux, const Grid1D& grid, WeightKind weight);

struct EnergyReport {
  double quadratic_part = 0.0;
  // Integral of sqrt(1 - u_t^2 + u_x^2) * weight; empty when the discriminant
  // is negative somewhere.
  std::optional<double> geometric_action;
  WeightKind weight_kind = WeightKind::Unweighted;
};

EnergyReport energy_report(std::span<const double> ut, std::span<const double> ux, const Grid1D& grid,
                           WeightKind weight);

nlohmann::json to_json(const EnergyReport& report);

// (u_t, u_x) of a test field at (t, x).
using FieldGradient = std::function<std::pair<double, double>(double t, double x)>;

struct ScalingMeasurement {
  std::vector<double> lambda_values;
  std::vector<double> energies;
  double measured_exponent = 0.0;
  FitResult fit;
  double claimed_exponent = 1.0;
  WeightKind weight_kind = WeightKind::Unweighted;
};

// Quadratic energy of u_lambda(t, x) = u(lambda t, lambda x) / lambda at time
// t over [0, L / lambda] (the preimage of [0, L]), fitted against lambda on
// log-log axes.
ScalingMeasurement measure_scaling_exponent(const FieldGradient& field, const std::vector<double>& lambdas,
                                            WeightKind weight, double t = 0.0, double L = 1.0, int cells = 400);

nlohmann::json to_json(const ScalingMeasurement& m);

}  // namespace zmc
