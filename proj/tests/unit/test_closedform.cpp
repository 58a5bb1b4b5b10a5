#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "gen.hpp"

#include "zmc/closedform.hpp"
#include "zmc/errors.hpp"
#include "zmc/residual.hpp"

using namespace zmc;
using zmc::testing::Gen;
using zmc::testing::observed_order;

namespace {

const std::vector<Family> kAll{Family::BornInfeldLog,       Family::MembraneSpherePlus,       Family::MembraneSphereMinus,
                               Family::SpacelikeLogClaimed, Family::SpacelikeArctanCorrected, Family::ConstantProfile};

// Random interior point, well away from the edge of the validity set.
Point interior_point(Gen& g, Family f, double T) {
  if (is_spacelike(f)) return {g.uniform(-1.0, 0.8 * T), g.uniform(-1.0, 1.0)};
  const double t = g.uniform(0.0, 0.7 * T);
  if (f == Family::ConstantProfile) return {t, g.uniform(-1.0, 1.0)};
  const double a = T - t;
  return {t, g.uniform(-0.7 * a, 0.7 * a)};
}

double value(const ClosedFormSolution& s, double a, double b) { return evaluate_jet(s, {a, b}).value; }

// Max deviation of the jet's derivatives from central differences of value.
double fd_error(const ClosedFormSolution& s, Point p, double h) {
  const double a = p.a, b = p.b;
  const Jet2 j = evaluate_jet(s, p);
  const double f0 = j.value;
  const double fa = (value(s, a + h, b) - value(s, a - h, b)) / (2 * h);
  const double fb = (value(s, a, b + h) - value(s, a, b - h)) / (2 * h);
  const double faa = (value(s, a + h, b) - 2 * f0 + value(s, a - h, b)) / (h * h);
  const double fbb = (value(s, a, b + h) - 2 * f0 + value(s, a, b - h)) / (h * h);
  const double fab =
      (value(s, a + h, b + h) - value(s, a + h, b - h) - value(s, a - h, b + h) + value(s, a - h, b - h)) / (4 * h * h);
  return std::max({std::abs(fa - j.d0), std::abs(fb - j.d1), std::abs(faa - j.d00), std::abs(fbb - j.d11),
                   std::abs(fab - j.d01)});
}

}  // namespace

TEST_CASE("evaluate_jet examples") {
  const ClosedFormSolution bi(Family::BornInfeldLog, 1.0, 1.0);
  CHECK(std::abs(evaluate_jet(bi, {0.0, 0.0}).value) <= 1e-15);
  CHECK(std::abs(evaluate_jet(bi, {0.5, 0.25}).value - static_cast<double>(std::log(3.0L))) <= 1e-12);

  const Jet2 m = evaluate_jet(ClosedFormSolution(Family::MembraneSpherePlus, 1.0), {0.0, 0.0});
  CHECK(m.value == doctest::Approx(1.0));
  CHECK(std::abs(m.d1) <= 1e-15);
  CHECK(m.d0 == doctest::Approx(-1.0));

  CHECK(std::abs(evaluate_jet(ClosedFormSolution(Family::SpacelikeArctanCorrected, 1.0, 1.0), {0.0, 0.0}).value) <= 1e-15);
}

TEST_CASE("evaluate_jet rejects points outside the validity set") {
  const ClosedFormSolution bi(Family::BornInfeldLog, 1.0, 1.0);
  CHECK_THROWS_AS(evaluate_jet(bi, {0.5, 0.5}), DomainError);
  CHECK_THROWS_AS(evaluate_jet(bi, {1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(evaluate_jet(ClosedFormSolution(Family::MembraneSpherePlus, 1.0), {0.9, 0.2}), DomainError);
  CHECK_THROWS_AS(evaluate_jet(ClosedFormSolution(Family::SpacelikeArctanCorrected, 1.0), {1.0, 0.1}), DomainError);
  try {
    evaluate_jet(bi, {0.5, 0.6});
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    // The message names the inequality.
    CHECK(std::string(e.what()).find("<") != std::string::npos);
  }
}

TEST_CASE("family names round trip") {
  for (Family f : kAll) CHECK(family_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(family_from_string("no-such-family"), DomainError);
}

TEST_CASE("domain_contains") {
  const LightconeDomain L1{DomainKind::InteriorLightcone, 1.0};
  const LightconeDomain B1{DomainKind::BackwardLightcone, 1.0};
  CHECK(domain_contains(L1, {0.5, 0.4}));
  CHECK_FALSE(domain_contains(L1, {0.5, 0.5}));
  CHECK_FALSE(domain_contains(B1, {0.9, 0.2}));
  CHECK(domain_contains(B1, {0.5, 0.2}));
}

TEST_CASE("derivative_blowup_amplitude") {
  CHECK(derivative_blowup_amplitude({Family::BornInfeldLog, 1.0, 1.0}, 0.5) == doctest::Approx(4.0));
  CHECK(derivative_blowup_amplitude({Family::MembraneSpherePlus, 1.0}, 0.5) == doctest::Approx(-2.0));
  CHECK(derivative_blowup_amplitude({Family::MembraneSphereMinus, 1.0}, 0.5) == doctest::Approx(2.0));
  CHECK_THROWS_AS(derivative_blowup_amplitude({Family::BornInfeldLog, 1.0, 1.0}, 1.0), DomainError);
  // Grows like (T - t)^-1.
  const ClosedFormSolution s(Family::BornInfeldLog, 1.0, 0.3);
  for (double t : {0.9, 0.99, 0.999, 0.9999}) CHECK(derivative_blowup_amplitude(s, t) * (1.0 - t) == doctest::Approx(0.6));
}

TEST_CASE("every family's jet agrees with finite differences at second order") {
  Gen gen;
  for (Family f : kAll) {
    for (int trial = 0; trial < 40; ++trial) {
      const double T = gen.uniform(0.5, 2.0);
      const double k = gen.uniform(-2.0, 2.0);
      const ClosedFormSolution s(f, T, k);
      const Point p = interior_point(gen, f, T);
      // Small enough that the stencil stays inside the validity set.
      const double h0 = 1e-2 * T;
      const double e1 = fd_error(s, p, h0), e2 = fd_error(s, p, h0 / 2);
      CAPTURE(to_string(f));
      CAPTURE(p.a);
      CAPTURE(p.b);
      if (e1 < 1e-9) continue;  // polynomial in the stencil, nothing to measure
      CHECK(observed_order(e1, e2) >= 1.9);
    }
  }
}

TEST_CASE("membrane sign flip negates the whole jet") {
  Gen gen;
  for (int trial = 0; trial < 200; ++trial) {
    const double T = gen.uniform(0.5, 2.0);
    const Point p = interior_point(gen, Family::MembraneSpherePlus, T);
    const Jet2 a = evaluate_jet(ClosedFormSolution(Family::MembraneSpherePlus, T), p);
    const Jet2 b = evaluate_jet(ClosedFormSolution(Family::MembraneSphereMinus, T), p);
    CHECK(a.value == -b.value);
    CHECK(a.d0 == -b.d0);
    CHECK(a.d1 == -b.d1);
    CHECK(a.d00 == -b.d00);
    CHECK(a.d01 == -b.d01);
    CHECK(a.d11 == -b.d11);
  }
}

TEST_CASE("Born-Infeld family is odd in x") {
  Gen gen;
  for (int trial = 0; trial < 200; ++trial) {
    const double T = gen.uniform(0.5, 2.0), k = gen.uniform(-3, 3);
    const ClosedFormSolution s(Family::BornInfeldLog, T, k);
    const Point p = interior_point(gen, Family::BornInfeldLog, T);
    const double plus = evaluate_jet(s, p).value, minus = evaluate_jet(s, {p.a, -p.b}).value;
    CHECK(std::abs(plus + minus) <= 1e-14 * std::max(1.0, std::abs(plus)));
  }
}

TEST_CASE("membrane families are lightlike") {
  Gen gen;
  for (Family f : {Family::MembraneSpherePlus, Family::MembraneSphereMinus}) {
    for (int trial = 0; trial < 500; ++trial) {
      const double T = gen.uniform(0.5, 2.0);
      const double t = gen.uniform(0.0, 0.95 * T);
      const double r = gen.uniform(0.0, 0.95) * (T - t);
      const Jet2 j = evaluate_jet(ClosedFormSolution(f, T), {t, r});
      CHECK(std::abs(residual_at(EquationId::Eikonal, j, {t, r})) <= 1e-12);
    }
  }
}
