#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "zmc/jet.hpp"

namespace zmc {

// Linear coefficients of the perturbation equation for v = v~ - phi around a
// steady membrane profile phi, in the published form.
struct LinearizedCoefficients {
  double rho;
  double c_tt;   // 1 + phi'^2
  double c_tr;   // 2 (phi phi' + rho)
  double c_rr;   // -(1 - rho^2 - phi^2)
  double c_t;    // -(1 - phi'^2 + 2 phi'' phi + (2 / rho) phi')
  double c_r;    // -(1 / rho)(1 + 4 rho phi' phi - 3 (rho^2 - 1) phi'^2 - phi^2)
  double c_v;    // (1 / rho)(-2 rho phi'^2 + 2 rho phi'' phi + 2 phi' phi)

  double apply(const Jet2& w) const {
    return c_tt * w.d00 + c_tr * w.d01 + c_rr * w.d11 + c_t * w.d0 + c_r * w.d1 + c_v * w.value;
  }
};

LinearizedCoefficients linearized_coefficients(double phi, double dphi, double d2phi, double rho);

// Steady base profile with derivatives, as a function of rho.
struct BaseProfile {
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  std::function<double(double)> d2phi;
};

BaseProfile zero_profile();
BaseProfile constant_profile(double c);
BaseProfile branch_profile(int sign);

// Perturbation direction: (tau, rho)-jet of w at tau = 0 for each rho.
using Direction = std::function<Jet2(double rho)>;

// w = e^{nu tau} exp(-((rho - center) / width)^2)
Direction bump_direction(double center, double width, double nu = 0.0);

struct LinearizationCheck {
  double max_relative_mismatch = 0.0;
  double max_abs_difference = 0.0;
  double worst_rho = 0.0;
  double printed_at_worst = 0.0;      // printed linear operator applied to w
  double finite_diff_at_worst = 0.0;  // centred difference of the full equation
};

// Compares the printed linear operator against (N(phi + eps w) - N(phi - eps w)) / (2 eps)
// where N is the full similarity-frame membrane residual. Points where both
// sides are below 1e-14 count as exact agreement.
LinearizationCheck directional_linearization_check(const BaseProfile& base, const Direction& w, double eps,
                                                   const std::vector<double>& rho_samples);

enum class ModeClass { Stable, Unstable };

std::string to_string(ModeClass c);

// Re nu < 0 is stable; everything else, including Re nu = 0, is unstable.
ModeClass classify_mode(double nu);

struct ModeReport {
  std::array<long, 3> quadratic_coeffs{1, 3, -4};
  std::array<long, 2> roots{};
  std::array<ModeClass, 2> classification{};
  std::array<long, 2> claimed_roots{4, -1};
  bool match_verdict = false;
  // One unstable and one stable root in both the computed and published sets.
  bool qualitative_match = false;
};

// Roots of nu^2 + 3 nu - 4 in exact integer arithmetic, ascending.
ModeReport solve_mode_quadratic();

nlohmann::json to_json(const ModeReport& report);

struct ModeSample {
  double tau;
  double v;
  double residual;  // v_tautau + 3 v_tau - 4 v
};

std::vector<ModeSample> mode_growth_probe(double nu, double tau_lo, double tau_hi, int n, double amplitude);

}  // namespace zmc
