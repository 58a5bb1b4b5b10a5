#pragma once

#include <iosfwd>
#include <vector>

#include "zmc/jet.hpp"

namespace zmc {

// TimeBased:  tau = -log(T - t), rho = x / (T - t)
// SpaceBased: tau = -log(T - x), rho = y / (T - x)
// Both act on Point as (a, b) -> (tau, rho).
enum class Orientation { TimeBased, SpaceBased };

struct SimilarityMap {
  double T;
  Orientation orientation = Orientation::TimeBased;
};

Point to_similarity(const SimilarityMap& map, Point physical);
Point from_similarity(const SimilarityMap& map, Point similarity);

// How the similarity-frame unknown relates to u.
//   None:   u(a, b) = v(tau, rho)
//   Linear: u(a, b) = (T - a) v(tau, rho), i.e. v = e^tau u
// Always named at the call site; the two conventions are easy to confuse.
enum class Scaling { None, Linear };

// Physical 2-jet at `physical` -> jet of v in (tau, rho).
Jet2 transform_field_jet(const SimilarityMap& map, const Jet2& physical_jet, Point physical, Scaling scaling);

// Inverse of transform_field_jet: similarity jet at (tau, rho) -> physical jet.
Jet2 physical_jet(const SimilarityMap& map, const Jet2& similarity_jet, Point similarity, Scaling scaling);

enum class SteadyOde {
  BornInfeldSteady,  // (rho^2 - 1) v'' + 2 rho v' = 0
  SpacelikeSteady,   // (rho^2 + 1) v'' + 2 rho v' = 0
  MembraneSteady,    // tau-independent part of the membrane similarity equation
};

// Closed-form steady solutions with the published and corrected formulas
// side by side. For BornInfeldSteady both are k ln((1 + rho) / (1 - rho)) and
// claim_verified is true. For SpacelikeSteady the published formula is
// k asinh(rho) and the actual solution is k atan(rho).
struct SteadyClosedForm {
  double claimed;
  double corrected;
  bool claim_verified;
};

SteadyClosedForm steady_ode_closed_form(SteadyOde id, double k, double rho);

double steady_ode_residual(SteadyOde id, double v, double dv, double d2v, double rho);

struct SteadySolution {
  std::vector<double> rho;
  std::vector<double> v;
  std::vector<double> dv;
};

// Fixed-step RK4 from (v, v') at rho0 forward to rho_end. The step is
// adjusted so that an integer number of steps lands on rho_end.
SteadySolution steady_ode_integrate(SteadyOde id, double v0, double dv0, double rho0, double rho_end, double drho);

// Columns rho, v_numeric, v_closed_claimed, v_closed_corrected.
void write_steady_csv(std::ostream& out, const SteadySolution& solution, SteadyOde id, double k);

enum class TransformedEquation {
  BornInfeldSimilarity,  // Born-Infeld in (tau, rho) with u = v
  MembraneSimilarity,    // radial membrane in (tau, rho) with v = e^tau u
  SpacelikeSimilarity,   // spacelike equation in (tau, rho) with u = v
};

// Term-by-term evaluation of the similarity-frame equations in their
// published form, including the e^{2 tau} factors. jet.d0 is d/dtau and
// jet.d1 is d/drho.
//
// For the same field, the physical Born-Infeld residual equals
// e^{2 tau} times the BornInfeldSimilarity residual, and the physical radial
// membrane residual equals e^{tau} times the MembraneSimilarity residual.
double transformed_equation_residual(TransformedEquation eq, const Jet2& jet, Point similarity);

}  // namespace zmc
