#include "zmc/closedform.hpp"

#include <cmath>
#include <sstream>

#include "zmc/errors.hpp"

namespace zmc {

std::string to_string(Family family) {
  switch (family) {
    case Family::BornInfeldLog: return "log";
    case Family::MembraneSpherePlus: return "sphere-plus";
    case Family::MembraneSphereMinus: return "sphere-minus";
    case Family::SpacelikeLogClaimed: return "log-claimed";
    case Family::SpacelikeArctanCorrected: return "arctan";
    case Family::ConstantProfile: return "constant";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "log") return Family::BornInfeldLog;
  if (name == "sphere-plus") return Family::MembraneSpherePlus;
  if (name == "sphere-minus") return Family::MembraneSphereMinus;
  if (name == "log-claimed") return Family::SpacelikeLogClaimed;
  if (name == "arctan") return Family::SpacelikeArctanCorrected;
  if (name == "constant") return Family::ConstantProfile;
  throw DomainError("unknown family '" + name + "'");
}

bool is_membrane(Family family) {
  return family == Family::MembraneSpherePlus || family == Family::MembraneSphereMinus;
}

bool is_spacelike(Family family) {
  return family == Family::SpacelikeLogClaimed || family == Family::SpacelikeArctanCorrected;
}

ClosedFormSolution::ClosedFormSolution(Family family, double T, double k)
    : family_(family), T_(T), k_(k) {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("blow-up time T must be positive and finite");
  if (!std::isfinite(k)) throw DomainError("k must be finite");
  const bool needs_nonzero_k = family == Family::BornInfeldLog || is_spacelike(family);
  if (needs_nonzero_k && k == 0.0) throw DomainError("k must be nonzero for the " + to_string(family) + " family");
}

bool ClosedFormSolution::valid_at(Point p) const noexcept {
  switch (family_) {
    case Family::BornInfeldLog:
    case Family::MembraneSpherePlus:
    case Family::MembraneSphereMinus: return p.a < T_ && std::abs(p.b) < T_ - p.a;
    case Family::SpacelikeLogClaimed:
    case Family::SpacelikeArctanCorrected: return p.a < T_;
    case Family::ConstantProfile: return p.a < T_;
  }
  return false;
}

namespace {

[[noreturn]] void outside(const ClosedFormSolution& sol, Point p, const char* inequality) {
  std::ostringstream msg;
  msg.precision(17);
  msg << to_string(sol.family()) << " family evaluated at (" << p.a << ", " << p.b << ") with T="
      << sol.T() << ": requires " << inequality;
  throw DomainError(msg.str());
}

}  // namespace

template <typename Real>
BasicJet2<Real> evaluate_jet(const ClosedFormSolution& sol, Point p) {
  const Real T = sol.T();
  const Real k = sol.k();
  const Real s0 = p.a;
  const Real s1 = p.b;
  BasicJet2<Real> j;

  switch (sol.family()) {
    case Family::BornInfeldLog: {
      if (!(p.a < sol.T())) outside(sol, p, "t < T");
      if (!(std::abs(p.b) < sol.T() - p.a)) outside(sol, p, "|x| < T - t");
      const Real a = T - s0;
      const Real x = s1;
      const Real d = (a - x) * (a + x);
      const Real d2 = d * d;
      j.value = k * (std::log(a + x) - std::log(a - x));
      j.d0 = 2 * k * x / d;
      j.d1 = 2 * k * a / d;
      j.d00 = 4 * k * a * x / d2;
      j.d11 = 4 * k * a * x / d2;
      j.d01 = 2 * k * (a * a + x * x) / d2;
      return j;
    }
    case Family::MembraneSpherePlus:
    case Family::MembraneSphereMinus: {
      if (!(p.a < sol.T())) outside(sol, p, "t < T");
      if (!(std::abs(p.b) < sol.T() - p.a)) outside(sol, p, "r < T - t");
      const Real sign = sol.family() == Family::MembraneSpherePlus ? 1 : -1;
      const Real a = T - s0;
      const Real r = s1;
      const Real g = std::sqrt((a - r) * (a + r));
      const Real g3 = g * g * g;
      j.value = sign * g;
      j.d0 = -sign * a / g;
      j.d1 = -sign * r / g;
      j.d00 = -sign * r * r / g3;
      j.d01 = -sign * a * r / g3;
      j.d11 = -sign * a * a / g3;
      return j;
    }
    case Family::SpacelikeLogClaimed: {
      if (!(p.a < sol.T())) outside(sol, p, "x < T");
      const Real b = T - s0;
      const Real y = s1;
      const Real D = std::sqrt(b * b + y * y);
      const Real D3 = D * D * D;
      j.value = k * std::asinh(y / b);
      j.d0 = k * y / (b * D);
      j.d1 = k / D;
      j.d00 = k * y * (2 * b * b + y * y) / (b * b * D3);
      j.d01 = k * b / D3;
      j.d11 = -k * y / D3;
      return j;
    }
    case Family::SpacelikeArctanCorrected: {
      if (!(p.a < sol.T())) outside(sol, p, "x < T");
      const Real b = T - s0;
      const Real y = s1;
      const Real D = b * b + y * y;
      const Real D2 = D * D;
      j.value = k * std::atan(y / b);
      j.d0 = k * y / D;
      j.d1 = k * b / D;
      j.d00 = 2 * k * b * y / D2;
      j.d01 = k * (b - y) * (b + y) / D2;
      j.d11 = -2 * k * b * y / D2;
      return j;
    }
    case Family::ConstantProfile: {
      if (!(p.a < sol.T())) outside(sol, p, "t < T");
      j.value = k * (T - s0);
      j.d0 = -k;
      return j;
    }
  }
  throw DomainError("unhandled family");
}

template Jet2 evaluate_jet<double>(const ClosedFormSolution&, Point);
template Jet2Ext evaluate_jet<long double>(const ClosedFormSolution&, Point);

bool domain_contains(const LightconeDomain& domain, Point p) {
  const double T = domain.T;
  switch (domain.kind) {
    case DomainKind::InteriorLightcone: return p.a >= 0.0 && p.a < T && std::abs(p.b) < T - p.a;
    case DomainKind::BackwardLightcone: return p.a > 0.0 && p.a < T && p.b >= 0.0 && p.b <= T - p.a;
    case DomainKind::HalfPlane: return p.a < T;
  }
  return false;
}

double derivative_blowup_amplitude(const ClosedFormSolution& sol, double t) {
  if (!(t >= 0.0)) throw DomainError("derivative_blowup_amplitude requires t >= 0");
  if (!(t < sol.T())) throw DomainError("derivative_blowup_amplitude requires t < T");
  const Jet2 jet = evaluate_jet(sol, {t, 0.0});
  switch (sol.family()) {
    case Family::BornInfeldLog: return jet.d1;
    case Family::MembraneSpherePlus:
    case Family::MembraneSphereMinus: return jet.d11;
    default: throw DomainError("derivative_blowup_amplitude is defined for the log and sphere families only");
  }
}

}  // namespace zmc
