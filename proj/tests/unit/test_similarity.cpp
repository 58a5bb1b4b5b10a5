#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "gen.hpp"

#include "zmc/closedform.hpp"
#include "zmc/errors.hpp"
#include "zmc/profile.hpp"
#include "zmc/residual.hpp"
#include "zmc/similarity.hpp"

using namespace zmc;
using zmc::testing::Gen;
using zmc::testing::observed_order;

namespace {

// Physical test field u(a, b) = A sin(b + w a) + B a b^2 with its exact jet.
struct Wavy {
  double A = 0.3, w = 0.5, B = 0.2;
  double value(double a, double b) const { return A * std::sin(b + w * a) + B * a * b * b; }
  Jet2 jet(double a, double b) const {
    const double s = std::sin(b + w * a), c = std::cos(b + w * a);
    return {value(a, b), A * w * c + B * b * b, A * c + 2 * B * a * b, -A * w * w * s, -A * w * s + 2 * B * b,
            -A * s + 2 * B * a};
  }
};

double scaled_value(const SimilarityMap& map, const Wavy& f, Scaling sc, double tau, double rho) {
  const Point p = from_similarity(map, {tau, rho});
  const double u = f.value(p.a, p.b);
  return sc == Scaling::Linear ? std::exp(tau) * u : u;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

bool same_jet(const Jet2& x, const Jet2& y, double tol) {
  return near(x.value, y.value, tol) && near(x.d0, y.d0, tol) && near(x.d1, y.d1, tol) && near(x.d00, y.d00, tol) &&
         near(x.d01, y.d01, tol) && near(x.d11, y.d11, tol);
}

}  // namespace

TEST_CASE("to_similarity examples and round trip") {
  const SimilarityMap m{1.0};
  const Point z = to_similarity(m, {0.0, 0.0});
  CHECK(z.a == 0.0);
  CHECK(z.b == 0.0);
  const double e = std::exp(-1.0);
  const Point q = to_similarity(m, {1.0 - e, 0.5 * e});
  CHECK(q.a == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q.b == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(to_similarity(m, {1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(to_similarity(m, {1.5, 0.0}), DomainError);

  Gen gen;
  for (Orientation o : {Orientation::TimeBased, Orientation::SpaceBased}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const SimilarityMap map{gen.uniform(0.5, 3.0), o};
      const Point p{gen.uniform(-2.0, 0.99 * map.T), gen.uniform(-2.0, 2.0)};
      const Point back = from_similarity(map, to_similarity(map, p));
      CHECK(std::abs(back.a - p.a) <= 1e-12 * std::max(1.0, std::abs(p.a)));
      CHECK(std::abs(back.b - p.b) <= 1e-12 * std::max(1.0, std::abs(p.b)));
    }
  }
}

TEST_CASE("transform_field_jet on constants and closed forms") {
  const SimilarityMap m{1.0};
  const Jet2 c{0.7, 0, 0, 0, 0, 0};
  const Point p{0.3, 0.1};
  const Jet2 none = transform_field_jet(m, c, p, Scaling::None);
  CHECK(none.value == doctest::Approx(0.7));
  CHECK(std::abs(none.d0) + std::abs(none.d1) + std::abs(none.d00) + std::abs(none.d01) + std::abs(none.d11) <= 1e-14);
  // v = e^tau c: every tau derivative equals v, rho derivatives vanish.
  const Jet2 lin = transform_field_jet(m, c, p, Scaling::Linear);
  CHECK(lin.value == doctest::Approx(0.7 / 0.7));
  CHECK(lin.d0 == doctest::Approx(lin.value));
  CHECK(lin.d00 == doctest::Approx(lin.value));
  CHECK(std::abs(lin.d1) <= 1e-14);

  Gen gen;
  const double k = 0.6;
  for (int trial = 0; trial < 100; ++trial) {
    const double t = gen.uniform(0.0, 0.9), x = gen.uniform(-0.8, 0.8) * (1 - t);
    const Jet2 u = evaluate_jet(ClosedFormSolution(Family::BornInfeldLog, 1.0, k), {t, x});
    const Jet2 v = transform_field_jet(m, u, {t, x}, Scaling::None);
    const double rho = x / (1 - t);
    CHECK(near(v.value, k * std::log((1 + rho) / (1 - rho)), 1e-12));
    CHECK(std::abs(v.d0) <= 1e-10);
    CHECK(std::abs(v.d00) <= 1e-9);

    const Jet2 s = evaluate_jet(ClosedFormSolution(Family::MembraneSpherePlus, 1.0), {t, x});
    const Jet2 phi = transform_field_jet(m, s, {t, x}, Scaling::Linear);
    CHECK(near(phi.value, std::sqrt(1 - rho * rho), 1e-12));
    CHECK(std::abs(phi.d0) <= 1e-10);
  }
}

TEST_CASE("transform_field_jet matches finite differences in (tau, rho)") {
  Gen gen;
  const Wavy f;
  for (Orientation o : {Orientation::TimeBased, Orientation::SpaceBased}) {
    for (Scaling sc : {Scaling::None, Scaling::Linear}) {
      for (int trial = 0; trial < 20; ++trial) {
        const SimilarityMap map{gen.uniform(0.8, 1.5), o};
        const Point phys{gen.uniform(0.0, 0.5 * map.T), gen.uniform(-0.5, 0.5)};
        const Point sim = to_similarity(map, phys);
        const Jet2 j = transform_field_jet(map, f.jet(phys.a, phys.b), phys, sc);
        const auto err_at = [&](double h) {
          const auto v = [&](double dt, double dr) { return scaled_value(map, f, sc, sim.a + dt, sim.b + dr); };
          const double v0 = v(0, 0);
          return std::max({std::abs((v(h, 0) - v(-h, 0)) / (2 * h) - j.d0), std::abs((v(0, h) - v(0, -h)) / (2 * h) - j.d1),
                           std::abs((v(h, 0) - 2 * v0 + v(-h, 0)) / (h * h) - j.d00),
                           std::abs((v(0, h) - 2 * v0 + v(0, -h)) / (h * h) - j.d11),
                           std::abs((v(h, h) - v(h, -h) - v(-h, h) + v(-h, -h)) / (4 * h * h) - j.d01)});
        };
        const double e1 = err_at(1e-2), e2 = err_at(5e-3);
        CHECK(std::abs(j.value - scaled_value(map, f, sc, sim.a, sim.b)) <= 1e-14);
        CHECK(observed_order(e1, e2) >= 1.9);
      }
    }
  }
}

TEST_CASE("physical_jet inverts transform_field_jet") {
  Gen gen;
  for (Orientation o : {Orientation::TimeBased, Orientation::SpaceBased}) {
    for (Scaling sc : {Scaling::None, Scaling::Linear}) {
      for (int trial = 0; trial < 500; ++trial) {
        const SimilarityMap map{gen.uniform(0.5, 2.0), o};
        const Point phys{gen.uniform(-1.0, 0.9 * map.T), gen.uniform(-1.0, 1.0)};
        const Jet2 u{gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(-1, 1),
                     gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(-1, 1)};
        const Jet2 v = transform_field_jet(map, u, phys, sc);
        CHECK(same_jet(physical_jet(map, v, to_similarity(map, phys), sc), u, 1e-9));
      }
    }
  }
}

TEST_CASE("physical residuals are rescaled similarity residuals") {
  Gen gen;
  const Wavy f;
  for (int trial = 0; trial < 300; ++trial) {
    const SimilarityMap time{1.0, Orientation::TimeBased};
    const double t = gen.uniform(0.0, 0.8), x = gen.uniform(0.05, 0.9) * (1 - t);
    const Point sim = to_similarity(time, {t, x});
    const Jet2 u = f.jet(t, x);

    const double bi = residual_at(EquationId::BornInfeld, u, {t, x});
    const double bi_sim = transformed_equation_residual(TransformedEquation::BornInfeldSimilarity,
                                                        transform_field_jet(time, u, {t, x}, Scaling::None), sim);
    CHECK(near(bi, std::exp(2 * sim.a) * bi_sim, 1e-8));

    const double mem = residual_at(EquationId::RadialMembrane, u, {t, x});
    const double mem_sim = transformed_equation_residual(TransformedEquation::MembraneSimilarity,
                                                         transform_field_jet(time, u, {t, x}, Scaling::Linear), sim);
    CHECK(near(mem, std::exp(sim.a) * mem_sim, 1e-8));

    const SimilarityMap space{1.0, Orientation::SpaceBased};
    const double sx = gen.uniform(-0.5, 0.8), sy = gen.uniform(-0.8, 0.8);
    const Jet2 us = f.jet(sx, sy);
    const Point ssim = to_similarity(space, {sx, sy});
    const double sl = residual_at(EquationId::SpacelikeZmc, us, {sx, sy});
    const double sl_sim = transformed_equation_residual(TransformedEquation::SpacelikeSimilarity,
                                                        transform_field_jet(space, us, {sx, sy}, Scaling::None), ssim);
    CHECK(near(sl, std::exp(2 * ssim.a) * sl_sim, 1e-8));
  }
}

TEST_CASE("steady closed forms") {
  CHECK(steady_ode_closed_form(SteadyOde::BornInfeldSteady, 1.0, 0.0).claimed == 0.0);
  const SteadyClosedForm b = steady_ode_closed_form(SteadyOde::BornInfeldSteady, 2.0, 0.5);
  CHECK(b.claimed == doctest::Approx(2 * std::log(3.0)).epsilon(1e-14));
  CHECK(b.corrected == b.claimed);
  CHECK(b.claim_verified);
  const SteadyClosedForm s = steady_ode_closed_form(SteadyOde::SpacelikeSteady, 1.0, 1.0);
  CHECK(s.claimed == doctest::Approx(0.8813736).epsilon(1e-7));
  CHECK(s.corrected == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
  CHECK_FALSE(s.claim_verified);
  CHECK_THROWS_AS(steady_ode_closed_form(SteadyOde::BornInfeldSteady, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(steady_ode_closed_form(SteadyOde::MembraneSteady, 1.0, 0.5), DomainError);
}

TEST_CASE("steady residuals") {
  const double k = 1.3, r = 0.3;
  CHECK(std::abs(steady_ode_residual(SteadyOde::BornInfeldSteady, 0, 2 * k / (1 - r * r), 4 * k * r / std::pow(1 - r * r, 2),
                                     r)) <= 1e-12);
  const double s = 0.7;
  CHECK(std::abs(steady_ode_residual(SteadyOde::SpacelikeSteady, 0, k / (1 + s * s), -2 * k * s / std::pow(1 + s * s, 2),
                                     s)) <= 1e-12);
  const double asinh_res = steady_ode_residual(SteadyOde::SpacelikeSteady, 0, k / std::sqrt(1 + s * s),
                                               -k * s * std::pow(1 + s * s, -1.5), s);
  CHECK(asinh_res == doctest::Approx(k * s / std::sqrt(1 + s * s)).epsilon(1e-12));
  CHECK(asinh_res / k == doctest::Approx(0.5735).epsilon(1e-3));
  CHECK_THROWS_AS(steady_ode_residual(SteadyOde::MembraneSteady, 0.5, 0.1, 0.1, 0.0), SingularPointError);
}

TEST_CASE("membrane steady part is -1/rho times the profile residual") {
  Gen gen;
  for (int trial = 0; trial < 10000; ++trial) {
    const double rho = gen.uniform(1e-3, 1.0 - 1e-3);
    const ProfileState st{rho, gen.uniform(-2, 2), gen.uniform(-2, 2)};
    const double d2 = gen.uniform(-2, 2);
    const double steady = steady_ode_residual(SteadyOde::MembraneSteady, st.phi, st.dphi, d2, rho);
    const double expected = -profile_residual(st, d2) / rho;
    CHECK(std::abs(steady - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
    // The similarity equation agrees on tau-independent fields.
    const double full = transformed_equation_residual(TransformedEquation::MembraneSimilarity,
                                                      {st.phi, 0, st.dphi, 0, 0, d2}, {gen.uniform(-3, 3), rho});
    CHECK(std::abs(full - steady) <= 1e-12 * std::max(1.0, std::abs(steady)));
  }
}

TEST_CASE("steady_ode_integrate reproduces the closed forms") {
  const SteadySolution bi = steady_ode_integrate(SteadyOde::BornInfeldSteady, 0, 2, 0, 0.9, 1e-3);
  double sup = 0.0;
  for (size_t i = 0; i < bi.rho.size(); ++i) sup = std::max(sup, std::abs(bi.v[i] - std::log((1 + bi.rho[i]) / (1 - bi.rho[i]))));
  CHECK(sup <= 1e-8);
  CHECK(bi.rho.back() == doctest::Approx(0.9).epsilon(1e-14));

  const SteadySolution sl = steady_ode_integrate(SteadyOde::SpacelikeSteady, 0, 1, 0, 2, 1e-3);
  sup = 0.0;
  for (size_t i = 0; i < sl.rho.size(); ++i) sup = std::max(sup, std::abs(sl.v[i] - std::atan(sl.rho[i])));
  CHECK(sup <= 1e-8);
  CHECK(std::abs(sl.v.back() - std::asinh(2.0)) >= 0.09);

  const SteadySolution z = steady_ode_integrate(SteadyOde::BornInfeldSteady, 0, 0, 0, 0.5, 1e-2);
  for (double v : z.v) CHECK(v == 0.0);

  CHECK_THROWS_AS(steady_ode_integrate(SteadyOde::BornInfeldSteady, 0, 2, 0, 1.0, 1e-3), DomainError);
  CHECK_THROWS_AS(steady_ode_integrate(SteadyOde::SpacelikeSteady, 0, 1, 1, 0.5, 1e-3), DomainError);
  CHECK_THROWS_AS(steady_ode_integrate(SteadyOde::MembraneSteady, 0.5, 0, 0, 0.5, 1e-3), DomainError);
}

TEST_CASE("steady integration converges at fourth order") {
  double prev = 0.0;
  for (int level = 0; level < 3; ++level) {
    const double h = 0.1 / (1 << level);
    const SteadySolution s = steady_ode_integrate(SteadyOde::SpacelikeSteady, 0, 1, 0, 2, h);
    const double err = std::abs(s.v.back() - std::atan(2.0));
    if (level > 0) CHECK(observed_order(prev, err) >= 3.9);
    prev = err;
  }
}

TEST_CASE("transformed residual examples") {
  const double r = 0.5, phi = std::sqrt(1 - r * r);
  const Jet2 branch{phi, 0, -r / phi, 0, 0, -std::pow(1 - r * r, -1.5)};
  CHECK(std::abs(transformed_equation_residual(TransformedEquation::MembraneSimilarity, branch, {0.3, r})) <= 1e-10);
  CHECK(transformed_equation_residual(TransformedEquation::BornInfeldSimilarity, Jet2{}, {0.7, 0.2}) == 0.0);
  const double q = 0.4, k = 1.0;
  const Jet2 logv{k * std::log((1 + q) / (1 - q)), 0, 2 * k / (1 - q * q), 0, 0, 4 * k * q / std::pow(1 - q * q, 2)};
  // The e^{2 tau} block cancels exactly; what is left is rounding at that scale.
  for (double tau : {-1.0, 0.0, 2.0, 5.0})
    CHECK(std::abs(transformed_equation_residual(TransformedEquation::BornInfeldSimilarity, logv, {tau, q})) <=
          1e-10 * std::max(1.0, std::exp(2 * tau - 4)));
  CHECK_THROWS_AS(transformed_equation_residual(TransformedEquation::MembraneSimilarity, branch, {0.0, 0.0}),
                  SingularPointError);
}

TEST_CASE("steady csv has four columns") {
  std::ostringstream out;
  write_steady_csv(out, steady_ode_integrate(SteadyOde::SpacelikeSteady, 0, 1, 0, 1, 0.1), SteadyOde::SpacelikeSteady, 1.0);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "rho,v_numeric,v_closed_claimed,v_closed_corrected");
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
    ++rows;
  }
  CHECK(rows == 11);
}
