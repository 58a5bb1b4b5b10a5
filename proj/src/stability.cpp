#include "zmc/stability.hpp"

#include <algorithm>
#include <cmath>

#include "zmc/errors.hpp"
#include "zmc/similarity.hpp"

namespace zmc {

LinearizedCoefficients linearized_coefficients(double f, double f1, double f2, double rho) {
  if (rho == 0.0) throw SingularPointError("linearized coefficients are singular at rho = 0");
  LinearizedCoefficients c;
  c.rho = rho;
  c.c_tt = 1.0 + f1 * f1;
  c.c_tr = 2.0 * (f * f1 + rho);
  c.c_rr = -(1.0 - rho * rho - f * f);
  c.c_t = -(1.0 - f1 * f1 + 2.0 * f2 * f + 2.0 / rho * f1);
  c.c_r = -(1.0 + 4.0 * rho * f1 * f - 3.0 * (rho * rho - 1.0) * f1 * f1 - f * f) / rho;
  c.c_v = (-2.0 * rho * f1 * f1 + 2.0 * rho * f2 * f + 2.0 * f1 * f) / rho;
  return c;
}

BaseProfile zero_profile() { return constant_profile(0.0); }

BaseProfile constant_profile(double c) {
  return {[c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

BaseProfile branch_profile(int sign) {
  if (sign != 1 && sign != -1) throw DomainError("branch sign must be +1 or -1");
  const double s = sign;
  return {[s](double r) { return s * std::sqrt(1.0 - r * r); },
          [s](double r) { return -s * r / std::sqrt(1.0 - r * r); },
          [s](double r) { return -s / std::pow(1.0 - r * r, 1.5); }};
}

Direction bump_direction(double center, double width, double nu) {
  if (!(width > 0.0)) throw DomainError("bump width must be positive");
  return [=](double rho) {
    const double z = (rho - center) / width;
    const double b = std::exp(-z * z);
    const double b1 = -2.0 * z / width * b;
    const double b2 = (4.0 * z * z - 2.0) / (width * width) * b;
    Jet2 j;
    j.value = b;
    j.d0 = nu * b;
    j.d1 = b1;
    j.d00 = nu * nu * b;
    j.d01 = nu * b1;
    j.d11 = b2;
    return j;
  };
}

LinearizationCheck directional_linearization_check(const BaseProfile& base, const Direction& w, double eps,
                                                   const std::vector<double>& rho_samples) {
  if (!(eps >= 1e-8 && eps <= 1e-4)) throw DomainError("linearization step eps must lie in [1e-8, 1e-4]");
  LinearizationCheck out;
  bool first = true;
  for (double rho : rho_samples) {
    Jet2 phi;
    phi.value = base.phi(rho);
    phi.d1 = base.dphi(rho);
    phi.d11 = base.d2phi(rho);
    const Jet2 dir = w(rho);
    const LinearizedCoefficients c = linearized_coefficients(phi.value, phi.d1, phi.d11, rho);
    const double printed = c.apply(dir);
    const Point at{0.0, rho};
    const double plus = transformed_equation_residual(TransformedEquation::MembraneSimilarity, phi + eps * dir, at);
    const double minus = transformed_equation_residual(TransformedEquation::MembraneSimilarity, phi - eps * dir, at);
    const double fd = (plus - minus) / (2.0 * eps);
    const double scale = std::max(std::abs(printed), std::abs(fd));
    const double rel = scale < 1e-14 ? 0.0 : std::abs(printed - fd) / scale;
    out.max_abs_difference = std::max(out.max_abs_difference, std::abs(printed - fd));
    if (first || rel > out.max_relative_mismatch) {
      out.max_relative_mismatch = rel;
      out.worst_rho = rho;
      out.printed_at_worst = printed;
      out.finite_diff_at_worst = fd;
      first = false;
    }
  }
  return out;
}

std::string to_string(ModeClass c) { return c == ModeClass::Stable ? "stable" : "unstable"; }

ModeClass classify_mode(double nu) { return nu < 0.0 ? ModeClass::Stable : ModeClass::Unstable; }

namespace {

long isqrt_exact(long n) {
  if (n < 0) throw DomainError("mode quadratic has complex roots");
  long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  if (r * r != n) throw DomainError("mode quadratic discriminant is not a perfect square");
  return r;
}

}  // namespace

ModeReport solve_mode_quadratic() {
  ModeReport m;
  const long a = m.quadratic_coeffs[0], b = m.quadratic_coeffs[1], c = m.quadratic_coeffs[2];
  const long s = isqrt_exact(b * b - 4 * a * c);
  if ((-b - s) % (2 * a) != 0 || (-b + s) % (2 * a) != 0) throw DomainError("mode quadratic roots are not integers");
  m.roots = {(-b - s) / (2 * a), (-b + s) / (2 * a)};
  for (int i = 0; i < 2; ++i) {
    const long r = m.roots[i];
    if (a * r * r + b * r + c != 0) throw DomainError("mode quadratic root check failed");
    m.classification[i] = classify_mode(static_cast<double>(r));
  }

  std::array<long, 2> claimed = m.claimed_roots;
  std::sort(claimed.begin(), claimed.end());
  m.match_verdict = claimed == m.roots;
  const auto count_unstable = [](const std::array<long, 2>& r) {
    return std::count_if(r.begin(), r.end(), [](long v) { return classify_mode(static_cast<double>(v)) == ModeClass::Unstable; });
  };
  m.qualitative_match = count_unstable(m.roots) == 1 && count_unstable(claimed) == 1;
  return m;
}

nlohmann::json to_json(const ModeReport& m) {
  return {{"quadratic_coeffs", m.quadratic_coeffs},
          {"roots", m.roots},
          {"classification", {to_string(m.classification[0]), to_string(m.classification[1])}},
          {"claimed_roots", m.claimed_roots},
          {"match_verdict", m.match_verdict},
          {"qualitative_match", m.qualitative_match}};
}

std::vector<ModeSample> mode_growth_probe(double nu, double tau_lo, double tau_hi, int n, double amplitude) {
  if (n < 1) throw ArityError("mode_growth_probe needs at least one sample");
  std::vector<ModeSample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double tau = n > 1 ? tau_lo + (tau_hi - tau_lo) * i / (n - 1) : tau_lo;
    const double v = amplitude * std::exp(nu * tau);
    out.push_back({tau, v, (nu * nu + 3.0 * nu - 4.0) * v});
  }
  return out;
}

}  // namespace zmc
