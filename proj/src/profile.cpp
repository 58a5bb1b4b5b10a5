#include "zmc/profile.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "zmc/errors.hpp"
#include "zmc/numerics.hpp"

namespace zmc {

double profile_residual(const ProfileState& s, double d2phi) {
  const double r = s.rho, f = s.phi, f1 = s.dphi;
  return r * (1.0 - r * r) * d2phi + f1 - f1 * f * f + 2.0 * r * f * f1 * f1 - r * d2phi * f * f +
         (1.0 - r * r) * f1 * f1 * f1;
}

double profile_residual_grouped(const ProfileState& s, double d2phi) {
  const double r = s.rho, f = s.phi, f1 = s.dphi;
  return r * degeneracy_gap(r, f) * d2phi + f1 * (1.0 - f * f) + 2.0 * r * f * f1 * f1 + (1.0 - r * r) * f1 * f1 * f1;
}

double first_order_branch_residual(double rho, double phi, double dphi) {
  return dphi - dphi * phi * phi + 2.0 * rho * phi * dphi * dphi + (1.0 - rho * rho) * dphi * dphi * dphi;
}

std::string to_string(ProfileTermination t) {
  switch (t) {
    case ProfileTermination::ReachedEnd: return "reached-end";
    case ProfileTermination::DegeneracyHit: return "degeneracy-hit";
    case ProfileTermination::NonFinite: return "non-finite";
    case ProfileTermination::StepFloor: return "step-floor";
  }
  return "unknown";
}

double profile_second_derivative(const ProfileState& s) {
  const double lead = s.rho * degeneracy_gap(s.rho, s.phi);
  if (lead == 0.0) throw DegeneracyError("profile equation degenerate: rho (1 - rho^2 - phi^2) = 0");
  return -first_order_branch_residual(s.rho, s.phi, s.dphi) / lead;
}

namespace {

StateVector profile_rhs(double rho, const StateVector& y) {
  return {y[1], profile_second_derivative({rho, y[0], y[1]})};
}

bool finite_state(const StateVector& y) { return std::isfinite(y[0]) && std::isfinite(y[1]); }

}  // namespace

ProfileSolveResult integrate_profile(const ProfileState& start, double rho_end, double drho,
                                     const ProfileOptions& opts) {
  if (!(drho > 0.0)) throw DomainError("profile integration requires drho > 0");
  if (!(rho_end > start.rho)) throw DomainError("profile integration requires rho_end > starting rho");
  if (!(start.rho > 0.0)) throw SingularPointError("profile integration cannot start at rho = 0");

  ProfileSolveResult out;
  out.samples.push_back(start);
  double rho = start.rho;
  StateVector y{start.phi, start.dphi};
  double h = drho;
  const double gap0 = degeneracy_gap(rho, y[0]);
  const double side = gap0 >= 0.0 ? 1.0 : -1.0;

  if (std::abs(gap0) <= opts.eps_deg) {
    out.termination = ProfileTermination::DegeneracyHit;
    out.degeneracy_location = rho;
    return out;
  }

  while (rho < rho_end) {
    const double remaining = rho_end - rho;
    double step = std::min(h, remaining);
    // Absorb a sliver left over from accumulated rounding into this step.
    if (remaining - step < 1e-6 * step) step = remaining;
    if (step < opts.drho_min) {
      out.termination = ProfileTermination::StepFloor;
      return out;
    }

    StateVector next;
    double next_h = h;
    try {
      if (opts.tolerance > 0.0) {
        const AdaptiveStep a = rk4_adaptive_step(y, profile_rhs, rho, step, opts.tolerance, opts.drho_min);
        if (a.hit_floor) {
          out.termination = ProfileTermination::StepFloor;
          return out;
        }
        next = a.y;
        step = a.dt_taken;
        next_h = a.dt_next;
      } else {
        next = rk4_step(y, profile_rhs, rho, step);
      }
    } catch (const DegeneracyError&) {
      // A stage landed on the manifold; retry with a smaller step.
      h = step / 2.0;
      continue;
    } catch (const NonFiniteError&) {
      out.termination = ProfileTermination::NonFinite;
      return out;
    }
    if (!finite_state(next)) {
      out.termination = ProfileTermination::NonFinite;
      return out;
    }

    const double next_rho = step == remaining ? rho_end : rho + step;
    const double gap = degeneracy_gap(next_rho, next[0]);
    if (side * gap < -opts.eps_deg) {
      // Stepped through the manifold; refine toward the crossing.
      h = step / 2.0;
      continue;
    }

    rho = next_rho;
    y = next;
    out.samples.push_back({rho, y[0], y[1]});
    if (std::abs(gap) <= opts.eps_deg) {
      out.termination = ProfileTermination::DegeneracyHit;
      out.degeneracy_location = rho;
      return out;
    }
    h = opts.tolerance > 0.0 ? next_h : std::max(h, std::min(drho, 2.0 * h));
  }
  out.termination = ProfileTermination::ReachedEnd;
  return out;
}

ProfileSolveResult shoot_profile(double a, double rho_max, double drho, const ProfileOptions& opts) {
  if (!std::isfinite(a)) throw DomainError("shoot_profile requires finite a");
  if (!(drho > 0.0)) throw DomainError("shoot_profile requires drho > 0");
  if (!(rho_max <= 1.0 - opts.eps_deg)) throw DomainError("shoot_profile requires rho_max <= 1 - eps_deg");
  if (std::abs(1.0 - a * a) <= opts.eps_deg) {
    throw DegeneracyError("phi(0) = +-1 starts on the degenerate branch; use verify_branch");
  }
  const double rho0 = 10.0 * drho;
  if (!(rho0 < rho_max)) throw DomainError("shoot_profile requires rho_max > 10 drho");
  return integrate_profile({rho0, a, 0.0}, rho_max, drho, opts);
}

ResidualReport verify_branch(int sign, int n_samples, double rho_lo, double rho_hi) {
  if (sign != 1 && sign != -1) throw DomainError("branch sign must be +1 or -1");
  if (n_samples < 1) throw ArityError("verify_branch needs at least one sample");
  if (!(rho_lo > 0.0 && rho_hi < 1.0 && rho_lo <= rho_hi)) {
    throw DomainError("branch range must lie inside (0, 1)");
  }
  ResidualReport report;
  report.equation = sign > 0 ? "profile-branch-plus" : "profile-branch-minus";
  for (int i = 0; i < n_samples; ++i) {
    const double rho = n_samples > 1 ? rho_lo + (rho_hi - rho_lo) * i / (n_samples - 1) : rho_lo;
    const double g = std::sqrt(1.0 - rho * rho);
    const ProfileState s{rho, sign * g, -sign * rho / g};
    const double d2 = -sign / (g * g * g);
    const double r1 = profile_residual(s, d2);
    const double r2 = first_order_branch_residual(s.rho, s.phi, s.dphi);
    report.add({rho, s.phi}, std::abs(r1) >= std::abs(r2) ? r1 : r2);
  }
  report.finish();
  return report;
}

void write_profile_csv(std::ostream& out, const ProfileSolveResult& result) {
  out << "rho,phi,dphi,gap\n";
  char line[128];
  for (const ProfileState& s : result.samples) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", s.rho, s.phi, s.dphi, degeneracy_gap(s.rho, s.phi));
    out << line;
  }
}

}  // namespace zmc
