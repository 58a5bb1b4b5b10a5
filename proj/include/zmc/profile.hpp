#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zmc/residual.hpp"

namespace zmc {

// Self-similar membrane profile phi(rho) with the sphere branch
// phi = +-sqrt(1 - rho^2) as its explicit member.
struct ProfileState {
  double rho;
  double phi;
  double dphi;
};

// rho (1 - rho^2) phi'' + phi' - phi' phi^2 + 2 rho phi phi'^2 - rho phi'' phi^2 + (1 - rho^2) phi'^3
double profile_residual(const ProfileState& s, double d2phi);

// Same operator with the phi'' terms collected:
// rho (1 - rho^2 - phi^2) phi'' + phi' (1 - phi^2) + 2 rho phi phi'^2 + (1 - rho^2) phi'^3
double profile_residual_grouped(const ProfileState& s, double d2phi);

// phi' - phi' phi^2 + 2 rho phi phi'^2 + (1 - rho^2) phi'^3, which has to
// vanish wherever 1 - rho^2 - phi^2 = 0.
double first_order_branch_residual(double rho, double phi, double dphi);

inline double degeneracy_gap(double rho, double phi) { return 1.0 - rho * rho - phi * phi; }

enum class ProfileTermination { ReachedEnd, DegeneracyHit, NonFinite, StepFloor };

std::string to_string(ProfileTermination t);

struct ProfileSolveResult {
  std::vector<ProfileState> samples;
  ProfileTermination termination = ProfileTermination::ReachedEnd;
  std::optional<double> degeneracy_location;
};

struct ProfileOptions {
  double eps_deg = 1e-8;
  double drho_min = 1e-12;
  // 0 selects fixed steps; otherwise step-doubling control with this
  // absolute tolerance on (phi, phi').
  double tolerance = 0.0;
};

// phi'' solved from the grouped form. Throws DegeneracyError when the
// leading coefficient rho (1 - rho^2 - phi^2) vanishes.
double profile_second_derivative(const ProfileState& s);

// RK4 from an arbitrary regular state up to rho_end. The step shrinks by
// halving when the next step would cross the degenerate manifold, so a
// DegeneracyHit lands with |gap| <= eps_deg.
ProfileSolveResult integrate_profile(const ProfileState& start, double rho_end, double drho,
                                     const ProfileOptions& opts = {});

// Regular even start phi(0) = a, phi'(0) = 0, begun at rho = 10 drho.
// Throws DegeneracyError when |1 - a^2| <= eps_deg; the branch is checked with
// verify_branch instead.
ProfileSolveResult shoot_profile(double a, double rho_max, double drho, const ProfileOptions& opts = {});

// Samples the analytic branch phi = sign sqrt(1 - rho^2) at n points of
// [rho_lo, rho_hi]. Each point records the larger of |profile_residual| and
// |first_order_branch_residual|.
ResidualReport verify_branch(int sign, int n_samples, double rho_lo, double rho_hi);

// Columns rho, phi, dphi, gap.
void write_profile_csv(std::ostream& out, const ProfileSolveResult& result);

}  // namespace zmc
