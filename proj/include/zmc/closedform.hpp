#pragma once

#include <string>

#include "zmc/jet.hpp"

namespace zmc {

// Explicit self-similar solution families.
//
//   BornInfeldLog             u = k ln((T - t + x) / (T - t - x))      on |x| < T - t
//   MembraneSpherePlus/Minus  u = +-sqrt((T - t)^2 - r^2)              on |r| < T - t
//   SpacelikeLogClaimed       u = k asinh(y / (T - x))                 on x < T
//   SpacelikeArctanCorrected  u = k atan(y / (T - x))                  on x < T
//   ConstantProfile           u = k (T - t)                            on t < T
//
// SpacelikeLogClaimed is the published spacelike family. It does not solve
// the spacelike zero-mean-curvature equation; the arctan family does, and both
// are kept so the discrepancy can be measured.
enum class Family {
  BornInfeldLog,
  MembraneSpherePlus,
  MembraneSphereMinus,
  SpacelikeLogClaimed,
  SpacelikeArctanCorrected,
  ConstantProfile,
};

std::string to_string(Family family);
Family family_from_string(const std::string& name);

bool is_membrane(Family family);
bool is_spacelike(Family family);

// Immutable parameter set. k plays the role of the constant c for
// ConstantProfile and is ignored by the membrane families.
class ClosedFormSolution {
public:
  ClosedFormSolution(Family family, double T, double k = 1.0);

  Family family() const noexcept { return family_; }
  double T() const noexcept { return T_; }
  double k() const noexcept { return k_; }

  // Open set on which the formula and its derivatives are analytic.
  bool valid_at(Point p) const noexcept;

private:
  Family family_;
  double T_;
  double k_;
};

// Exact value and first/second partials from hand-derived formulas. Throws
// DomainError naming the violated inequality outside the open validity set.
template <typename Real>
BasicJet2<Real> evaluate_jet(const ClosedFormSolution& sol, Point p);

inline Jet2 evaluate_jet(const ClosedFormSolution& sol, Point p) { return evaluate_jet<double>(sol, p); }

enum class DomainKind { InteriorLightcone, BackwardLightcone, HalfPlane };

struct LightconeDomain {
  DomainKind kind;
  double T;
};

// InteriorLightcone: |x| < T - t, 0 <= t < T.
// BackwardLightcone: 0 <= r <= T - t, 0 < t < T.
// HalfPlane: x < T (point.a is x).
bool domain_contains(const LightconeDomain& domain, Point p);

// du/dx at x = 0 for BornInfeldLog (= 2k / (T - t)), d2u/dr2 at r = 0 for the
// membrane families (= -+1 / (T - t)).
double derivative_blowup_amplitude(const ClosedFormSolution& sol, double t);

inline constexpr double kBoundaryMargin = 1e-8;

}  // namespace zmc
