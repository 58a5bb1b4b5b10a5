#pragma once

#include <functional>
#include <span>
#include <vector>

#include "zmc/jet.hpp"

namespace zmc {

// Uniform grid of n cells (n + 1 nodes) on [lo, hi].
class Grid1D {
public:
  Grid1D(double lo, double hi, int n);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  int cells() const noexcept { return n_; }
  int num_nodes() const noexcept { return n_ + 1; }
  double spacing() const noexcept { return spacing_; }
  double node(int i) const noexcept { return lo_ + i * spacing_; }
  std::vector<double> nodes() const;

private:
  double lo_;
  double hi_;
  int n_;
  double spacing_;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int n_points = 0;
};

// Value, first and second derivative of a sampled function of one variable.
struct Jet1 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

enum class BoundaryPolicy { Error, OneSided };

// Closure used for the first derivative at the two ends of an array.
enum class EdgeClosure { SecondOrder, ThirdOrder };

// Samples of f(t, x) on a uniform space grid times `levels` uniform time
// levels t0, t0 + dt, ... Storage is row-major by time level.
struct SampledField {
  Grid1D grid;
  double t0 = 0.0;
  double dt = 0.0;
  int levels = 0;
  std::vector<double> values;

  double at(int level, int i) const { return values[static_cast<size_t>(level) * grid.num_nodes() + i]; }
  double time(int level) const { return t0 + level * dt; }

  static SampledField sample(const Grid1D& grid, double t0, double dt, int levels,
                             const std::function<double(double, double)>& f);
};

// Second-order central differences of a one-variable sample array. At the
// ends a second-order one-sided stencil is used only under OneSided.
Jet1 central_diff(std::span<const double> samples, const Grid1D& grid, int i,
                  BoundaryPolicy policy = BoundaryPolicy::Error);

// Second-order central 2-jet of a sampled f(t, x); variable 0 is time.
Jet2 central_diff_jet2(const SampledField& field, int i, int level);

// out = d f / dx with central differences inside and the given closure at the
// two ends. Needs at least four samples.
void first_derivative(std::span<const double> f, double h, std::span<double> out,
                      EdgeClosure closure = EdgeClosure::SecondOrder);

using StateVector = std::vector<double>;
using Derivative = std::function<StateVector(double, const StateVector&)>;

// One classical fourth-order Runge-Kutta step. Throws NonFiniteError naming
// the stage and component if the derivative returns a non-finite value.
StateVector rk4_step(const StateVector& y, const Derivative& f, double t, double dt);

struct AdaptiveStep {
  StateVector y;
  double dt_taken = 0.0;
  double dt_next = 0.0;
  bool hit_floor = false;
};

// Step-doubling wrapper around rk4_step: compares one step of dt with two of
// dt/2 and halves dt until the max-norm difference is below abs_tol. The
// returned state is the two-half-step result. hit_floor is set (and no step
// taken) when dt would drop below dt_min.
AdaptiveStep rk4_adaptive_step(const StateVector& y, const Derivative& f, double t, double dt,
                               double abs_tol, double dt_min);

// Least squares line through (log a_i, log b_i).
FitResult log_log_fit(std::span<const double> abscissae, std::span<const double> ordinates);

// Composite trapezoid rule for the integral of f(x) * weight(x) over the grid.
double trapezoid_quadrature(std::span<const double> samples, const Grid1D& grid,
                            const std::function<double(double)>& weight);
double trapezoid_quadrature(std::span<const double> samples, const Grid1D& grid);

// Trapezoid rule on equally spaced samples with spacing h.
double trapezoid_uniform(std::span<const double> samples, double h);

}  // namespace zmc
