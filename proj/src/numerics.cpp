#include "zmc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "zmc/errors.hpp"

namespace zmc {

Grid1D::Grid1D(double lo, double hi, int n) : lo_(lo), hi_(hi), n_(n), spacing_((hi - lo) / n) {
  if (!(std::isfinite(lo) && std::isfinite(hi)) || !(lo < hi)) {
    throw DomainError("Grid1D requires finite lo < hi");
  }
  if (n < 8) {
    throw DomainError("Grid1D requires at least 8 cells, got " + std::to_string(n));
  }
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> out(num_nodes());
  for (int i = 0; i < num_nodes(); ++i) out[i] = node(i);
  return out;
}

SampledField SampledField::sample(const Grid1D& grid, double t0, double dt, int levels,
                                  const std::function<double(double, double)>& f) {
  if (levels < 1 || !(dt > 0.0)) throw DomainError("SampledField needs levels >= 1 and dt > 0");
  SampledField field{grid, t0, dt, levels, {}};
  field.values.resize(static_cast<size_t>(levels) * grid.num_nodes());
  for (int l = 0; l < levels; ++l) {
    for (int i = 0; i < grid.num_nodes(); ++i) {
      field.values[static_cast<size_t>(l) * grid.num_nodes() + i] = f(field.time(l), grid.node(i));
    }
  }
  return field;
}

Jet1 central_diff(std::span<const double> samples, const Grid1D& grid, int i, BoundaryPolicy policy) {
  const int n = grid.num_nodes();
  if (static_cast<int>(samples.size()) != n) {
    throw ArityError("central_diff: sample count does not match grid");
  }
  if (i < 0 || i >= n) throw BoundaryError("central_diff: node index out of range");
  const double h = grid.spacing();
  const auto f = [&](int j) { return samples[j]; };

  if (i >= 1 && i <= n - 2) {
    return {f(i), (f(i + 1) - f(i - 1)) / (2.0 * h), (f(i + 1) - 2.0 * f(i) + f(i - 1)) / (h * h)};
  }
  if (policy == BoundaryPolicy::Error) {
    throw BoundaryError("central_diff: node " + std::to_string(i) +
                        " has no neighbour on both sides");
  }
  // Second-order one-sided stencils.
  if (i == 0) {
    return {f(0), (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h),
            (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / (h * h)};
  }
  return {f(i), (3.0 * f(i) - 4.0 * f(i - 1) + f(i - 2)) / (2.0 * h),
          (2.0 * f(i) - 5.0 * f(i - 1) + 4.0 * f(i - 2) - f(i - 3)) / (h * h)};
}

Jet2 central_diff_jet2(const SampledField& field, int i, int level) {
  const int n = field.grid.num_nodes();
  if (i < 1 || i > n - 2) {
    throw BoundaryError("central_diff_jet2: node " + std::to_string(i) + " touches the space boundary");
  }
  if (level < 1 || level > field.levels - 2) {
    throw BoundaryError("central_diff_jet2: level " + std::to_string(level) +
                        " touches the time boundary");
  }
  const double h = field.grid.spacing();
  const double k = field.dt;
  const auto f = [&](int l, int j) { return field.at(l, j); };

  Jet2 jet;
  jet.value = f(level, i);
  jet.d0 = (f(level + 1, i) - f(level - 1, i)) / (2.0 * k);
  jet.d1 = (f(level, i + 1) - f(level, i - 1)) / (2.0 * h);
  jet.d00 = (f(level + 1, i) - 2.0 * f(level, i) + f(level - 1, i)) / (k * k);
  jet.d11 = (f(level, i + 1) - 2.0 * f(level, i) + f(level, i - 1)) / (h * h);
  jet.d01 = (f(level + 1, i + 1) - f(level + 1, i - 1) - f(level - 1, i + 1) + f(level - 1, i - 1)) /
            (4.0 * h * k);
  return jet;
}

void first_derivative(std::span<const double> f, double h, std::span<double> out, EdgeClosure closure) {
  const size_t n = f.size();
  if (n < 4 || out.size() != n) throw ArityError("first_derivative needs >= 4 samples");
  for (size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  if (closure == EdgeClosure::SecondOrder) {
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  } else {
    out[0] = (-11.0 * f[0] + 18.0 * f[1] - 9.0 * f[2] + 2.0 * f[3]) / (6.0 * h);
    out[n - 1] = (11.0 * f[n - 1] - 18.0 * f[n - 2] + 9.0 * f[n - 3] - 2.0 * f[n - 4]) / (6.0 * h);
  }
}

namespace {

void check_stage(const StateVector& k, int stage, double t) {
  for (size_t i = 0; i < k.size(); ++i) {
    if (!std::isfinite(k[i])) {
      std::ostringstream msg;
      msg << "rk4 stage " << stage << " at t=" << t << " produced non-finite component " << i;
      throw NonFiniteError(msg.str());
    }
  }
}

StateVector axpy(const StateVector& y, double a, const StateVector& k) {
  StateVector out(y.size());
  for (size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * k[i];
  return out;
}

}  // namespace

StateVector rk4_step(const StateVector& y, const Derivative& f, double t, double dt) {
  if (!(dt > 0.0)) throw DomainError("rk4_step requires dt > 0");
  const StateVector k1 = f(t, y);
  check_stage(k1, 1, t);
  const StateVector k2 = f(t + 0.5 * dt, axpy(y, 0.5 * dt, k1));
  check_stage(k2, 2, t + 0.5 * dt);
  const StateVector k3 = f(t + 0.5 * dt, axpy(y, 0.5 * dt, k2));
  check_stage(k3, 3, t + 0.5 * dt);
  const StateVector k4 = f(t + dt, axpy(y, dt, k3));
  check_stage(k4, 4, t + dt);

  StateVector out(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

AdaptiveStep rk4_adaptive_step(const StateVector& y, const Derivative& f, double t, double dt,
                               double abs_tol, double dt_min) {
  while (dt >= dt_min) {
    const StateVector full = rk4_step(y, f, t, dt);
    const StateVector half = rk4_step(rk4_step(y, f, t, 0.5 * dt), f, t + 0.5 * dt, 0.5 * dt);
    double err = 0.0;
    for (size_t i = 0; i < y.size(); ++i) err = std::max(err, std::abs(full[i] - half[i]));
    if (err <= abs_tol) {
      // Grow cautiously when the estimate is far below tolerance.
      const double next = err < abs_tol / 32.0 ? 2.0 * dt : dt;
      return {half, dt, next, false};
    }
    dt *= 0.5;
  }
  return {y, 0.0, dt, true};
}

FitResult log_log_fit(std::span<const double> abscissae, std::span<const double> ordinates) {
  if (abscissae.size() != ordinates.size()) throw ArityError("log_log_fit: size mismatch");
  const size_t n = abscissae.size();
  if (n < 2) throw ArityError("log_log_fit needs at least 2 points");

  std::vector<double> lx(n), ly(n);
  for (size_t i = 0; i < n; ++i) {
    if (!(abscissae[i] > 0.0) || !(ordinates[i] > 0.0)) {
      throw DomainError("log_log_fit: inputs must be strictly positive");
    }
    lx[i] = std::log(abscissae[i]);
    ly[i] = std::log(ordinates[i]);
  }
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("log_log_fit: abscissae are all equal");

  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.n_points = static_cast<int>(n);
  double ss_res = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

double trapezoid_uniform(std::span<const double> samples, double h) {
  if (samples.size() < 2) throw ArityError("trapezoid needs at least 2 samples");
  double sum = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) throw NonFiniteError("trapezoid: non-finite sample " + std::to_string(i));
    const double w = (i == 0 || i + 1 == samples.size()) ? 0.5 : 1.0;
    sum += w * samples[i];
  }
  return h * sum;
}

double trapezoid_quadrature(std::span<const double> samples, const Grid1D& grid,
                            const std::function<double(double)>& weight) {
  if (static_cast<int>(samples.size()) != grid.num_nodes()) {
    throw ArityError("trapezoid_quadrature: sample count does not match grid");
  }
  std::vector<double> weighted(samples.size());
  for (int i = 0; i < grid.num_nodes(); ++i) weighted[i] = samples[i] * weight(grid.node(i));
  return trapezoid_uniform(weighted, grid.spacing());
}

double trapezoid_quadrature(std::span<const double> samples, const Grid1D& grid) {
  if (static_cast<int>(samples.size()) != grid.num_nodes()) {
    throw ArityError("trapezoid_quadrature: sample count does not match grid");
  }
  return trapezoid_uniform(samples, grid.spacing());
}

}  // namespace zmc
