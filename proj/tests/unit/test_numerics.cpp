#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "gen.hpp"

#include "zmc/errors.hpp"
#include "zmc/numerics.hpp"

using namespace zmc;
using zmc::testing::Gen;
using zmc::testing::observed_order;

namespace {

std::vector<double> sample(const Grid1D& g, double (*f)(double)) {
  std::vector<double> v(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i) v[i] = f(g.node(i));
  return v;
}

}  // namespace

TEST_CASE("grid basics") {
  const Grid1D g(0.0, 1.0, 100);
  CHECK(g.num_nodes() == 101);
  CHECK(g.spacing() == doctest::Approx(0.01));
  CHECK(g.node(100) == doctest::Approx(1.0));
  CHECK_THROWS_AS(Grid1D(1.0, 0.0, 10), DomainError);
  CHECK_THROWS_AS(Grid1D(0.0, 1.0, 0), DomainError);
}

TEST_CASE("central_diff on x^2, constants and sin") {
  const Grid1D g(0.0, 1.0, 100);
  const auto sq = sample(g, [](double x) { return x * x; });
  const Jet1 j = central_diff(sq, g, 37);
  CHECK(std::abs(j.d2 - 2.0) <= 1e-10);
  CHECK(std::abs(j.d1 - 2.0 * g.node(37)) <= 1e-10);

  const auto c = sample(g, [](double) { return 3.25; });
  const Jet1 jc = central_diff(c, g, 50);
  CHECK(std::abs(jc.d1) <= 1e-12);
  CHECK(std::abs(jc.d2) <= 1e-12);

  const Grid1D gs(0.0, 1.0, 100);  // h = 1e-2, node 50 is x = 0.5
  const auto s = sample(gs, [](double x) { return std::sin(x); });
  CHECK(std::abs(central_diff(s, gs, 50).d2 + std::sin(0.5)) <= 1e-4);
}

TEST_CASE("central_diff boundary policy") {
  const Grid1D g(0.0, 1.0, 10);
  const auto sq = sample(g, [](double x) { return x * x; });
  CHECK_THROWS_AS(central_diff(sq, g, 0), BoundaryError);
  CHECK_THROWS_AS(central_diff(sq, g, 10), BoundaryError);
  // One-sided second order is exact on quadratics too.
  const Jet1 left = central_diff(sq, g, 0, BoundaryPolicy::OneSided);
  CHECK(std::abs(left.d1) <= 1e-10);
  CHECK(std::abs(left.d2 - 2.0) <= 1e-9);
}

TEST_CASE("central_diff_jet2 on a quadratic in (t, x)") {
  Gen gen;
  for (int trial = 0; trial < 50; ++trial) {
    const double a = gen.uniform(-2, 2), b = gen.uniform(-2, 2), c = gen.uniform(-2, 2);
    const double d = gen.uniform(-2, 2), e = gen.uniform(-2, 2), f0 = gen.uniform(-2, 2);
    const double h = gen.uniform(1e-3, 1e-1);
    const Grid1D g(-1.0, 1.0, static_cast<int>(std::ceil(2.0 / h)));
    const auto f = [=](double t, double x) { return f0 + a * t + b * x + c * t * t + d * t * x + e * x * x; };
    const SampledField sf = SampledField::sample(g, 0.2, g.spacing(), 3, f);
    const int i = g.num_nodes() / 2;
    const double t = sf.time(1), x = g.node(i);
    const Jet2 j = central_diff_jet2(sf, i, 1);
    const auto close = [](double got, double want) { return std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)) * 1e2; };
    CHECK(close(j.value, f(t, x)));
    CHECK(close(j.d0, a + 2 * c * t + d * x));
    CHECK(close(j.d1, b + d * t + 2 * e * x));
    CHECK(close(j.d00, 2 * c));
    CHECK(close(j.d01, d));
    CHECK(close(j.d11, 2 * e));
  }
}

TEST_CASE("central_diff_jet2 converges at second order") {
  const auto f = [](double t, double x) { return std::sin(1.3 * x + 0.7 * t) * std::exp(0.4 * t); };
  const double t0 = 0.3, x0 = 0.25;
  double prev = 0.0;
  for (int level = 0; level < 4; ++level) {
    const double h = 0.05 / (1 << level);
    const int n = static_cast<int>(std::lround(1.0 / h));
    const Grid1D g(x0 - 0.5, x0 + 0.5, n);
    const SampledField sf = SampledField::sample(g, t0 - h, h, 3, f);
    const Jet2 j = central_diff_jet2(sf, n / 2, 1);
    const double s = std::sin(1.3 * x0 + 0.7 * t0), c = std::cos(1.3 * x0 + 0.7 * t0), e = std::exp(0.4 * t0);
    const double exact_d01 = e * (-1.3 * 0.7 * s + 0.4 * 1.3 * c);
    const double exact_d11 = -1.69 * s * e;
    const double err = std::max(std::abs(j.d01 - exact_d01), std::abs(j.d11 - exact_d11));
    if (level > 0) CHECK(observed_order(prev, err) >= 1.9);
    prev = err;
  }
}

TEST_CASE("central_diff_jet2 refuses edge nodes") {
  const Grid1D g(0.0, 1.0, 10);
  const SampledField sf = SampledField::sample(g, 0.0, 0.1, 3, [](double t, double x) { return t + x; });
  CHECK_THROWS_AS(central_diff_jet2(sf, 0, 1), BoundaryError);
  CHECK_THROWS_AS(central_diff_jet2(sf, 5, 0), BoundaryError);
  CHECK_THROWS_AS(central_diff_jet2(sf, 5, 2), BoundaryError);
}

TEST_CASE("first_derivative closures") {
  const Grid1D g(0.0, 1.0, 40);
  const auto cube = sample(g, [](double x) { return x * x * x; });
  std::vector<double> d2(cube.size()), d3(cube.size());
  first_derivative(cube, g.spacing(), d2, EdgeClosure::SecondOrder);
  first_derivative(cube, g.spacing(), d3, EdgeClosure::ThirdOrder);
  // The third-order closure is exact on cubics at the ends.
  CHECK(std::abs(d3.front()) <= 1e-10);
  CHECK(std::abs(d3.back() - 3.0) <= 1e-10);
  CHECK(std::abs(d2.back() - 3.0) > 1e-6);
  std::vector<double> tiny(3), out(3);
  CHECK_THROWS(first_derivative(tiny, 0.1, out));
}

TEST_CASE("rk4_step examples") {
  const Derivative grow = [](double, const StateVector& y) { return StateVector{y[0]}; };
  const StateVector y1 = rk4_step({1.0}, grow, 0.0, 0.1);
  CHECK(std::abs(y1[0] - static_cast<double>(std::exp(0.1L))) <= 1e-7);

  const Derivative still = [](double, const StateVector& y) { return StateVector(y.size(), 0.0); };
  const StateVector s0{0.3, -1.0, 7.0};
  CHECK(rk4_step(s0, still, 0.0, 0.5) == s0);

  const Derivative gauss = [](double t, const StateVector& y) { return StateVector{-2.0 * t * y[0]}; };
  StateVector y{1.0};
  const double dt = 1e-3;
  for (int k = 0; k < 1000; ++k) y = rk4_step(y, gauss, k * dt, dt);
  CHECK(std::abs(y[0] - std::exp(-1.0)) <= 1e-9);
}

TEST_CASE("rk4_step order on y' = y") {
  const Derivative grow = [](double, const StateVector& y) { return StateVector{y[0]}; };
  double prev = 0.0;
  for (int level = 0; level < 4; ++level) {
    const int steps = 10 << level;
    const double dt = 1.0 / steps;
    StateVector y{1.0};
    for (int k = 0; k < steps; ++k) y = rk4_step(y, grow, k * dt, dt);
    const double err = std::abs(y[0] - std::exp(1.0));
    if (level > 0) CHECK(observed_order(prev, err) >= 3.9);
    prev = err;
  }
}

TEST_CASE("rk4_step reports non-finite stage") {
  const Derivative bad = [](double t, const StateVector& y) {
    return StateVector{t > 0.04 ? std::numeric_limits<double>::quiet_NaN() : y[0]};
  };
  try {
    rk4_step({1.0}, bad, 0.0, 0.1);
    FAIL("expected NonFiniteError");
  } catch (const NonFiniteError& e) {
    CHECK(std::string(e.what()).find("stage") != std::string::npos);
  }
}

TEST_CASE("rk4_adaptive_step respects tolerance and floor") {
  const Derivative stiffish = [](double, const StateVector& y) { return StateVector{-50.0 * y[0]}; };
  const AdaptiveStep s = rk4_adaptive_step({1.0}, stiffish, 0.0, 0.5, 1e-10, 1e-12);
  CHECK_FALSE(s.hit_floor);
  CHECK(s.dt_taken < 0.5);
  CHECK(std::abs(s.y[0] - std::exp(-50.0 * s.dt_taken)) <= 1e-9);
  const AdaptiveStep f = rk4_adaptive_step({1.0}, stiffish, 0.0, 0.5, 1e-30, 1e-3);
  CHECK(f.hit_floor);
}

TEST_CASE("log_log_fit") {
  std::vector<double> a, b2, b3;
  for (int i = 1; i <= 10; ++i) {
    a.push_back(0.3 * i);
    b2.push_back(0.09 * i * i);
    b3.push_back(0.9 * i);
  }
  const FitResult sq = log_log_fit(a, b2);
  CHECK(std::abs(sq.slope - 2.0) <= 1e-12);
  CHECK(sq.r_squared == doctest::Approx(1.0).epsilon(1e-14));
  const FitResult lin = log_log_fit(a, b3);
  CHECK(std::abs(lin.slope - 1.0) <= 1e-12);
  CHECK(std::abs(lin.intercept - std::log(3.0)) <= 1e-12);

  Gen gen;
  std::vector<double> x, y;
  for (int i = 0; i < 50; ++i) {
    x.push_back(gen.uniform(0.1, 10.0));
    y.push_back(std::pow(x.back(), 1.5) * (1.0 + gen.uniform(-1e-3, 1e-3)));
  }
  CHECK(std::abs(log_log_fit(x, y).slope - 1.5) <= 5e-3);

  const std::vector<double> one{1.0}, neg{-1.0, 2.0}, pos{1.0, 2.0};
  CHECK_THROWS_AS(log_log_fit(one, one), ArityError);
  CHECK_THROWS_AS(log_log_fit(neg, pos), DomainError);
  CHECK_THROWS_AS(log_log_fit(pos, neg), DomainError);
}

TEST_CASE("log_log_fit is exact on random power laws") {
  Gen gen;
  for (int trial = 0; trial < 200; ++trial) {
    const double p = gen.uniform(-3, 3), c = gen.uniform(0.1, 10);
    std::vector<double> a, b;
    const int n = gen.integer(3, 12);
    for (int i = 0; i < n; ++i) {
      a.push_back(gen.uniform(0.01, 100));
      b.push_back(c * std::pow(a.back(), p));
    }
    CHECK(std::abs(log_log_fit(a, b).slope - p) <= 1e-12 * std::max(1.0, std::abs(p)) * 10);
  }
}

TEST_CASE("trapezoid quadrature") {
  const Grid1D g(0.0, 1.0, 100);
  const auto one = sample(g, [](double) { return 1.0; });
  const auto x = sample(g, [](double t) { return t; });
  CHECK(std::abs(trapezoid_quadrature(one, g, [](double t) { return t; }) - 0.5) <= 1e-10);
  CHECK(std::abs(trapezoid_quadrature(x, g) - 0.5) <= 1e-10);
  const Grid1D gp(0.0, std::numbers::pi, 10000);
  const auto s = sample(gp, [](double t) { return std::sin(t); });
  CHECK(std::abs(trapezoid_quadrature(s, gp) - 2.0) <= 1e-6);
  CHECK(std::abs(trapezoid_uniform(x, g.spacing()) - 0.5) <= 1e-10);
}
