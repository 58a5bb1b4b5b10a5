#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "zmc/closedform.hpp"
#include "zmc/numerics.hpp"
#include "zmc/residual.hpp"

namespace zmc {

enum class EvolutionEquation { BornInfeld, RadialMembrane };

// HalfLine: grid on [0, R], axis at node 0 handled with parity ghosts.
// FullLine: grid on [-R, R] with signed radius x, used to check parity.
enum class RadialLayout { HalfLine, FullLine };

struct StopConditions {
  double t_end = 0.8;
  double max_gradient = 1e6;
  double min_discriminant_floor = 1e-6;
  double dt_floor = 1e-12;
};

struct EvolutionConfig {
  EvolutionEquation equation = EvolutionEquation::BornInfeld;
  RadialLayout layout = RadialLayout::HalfLine;
  double T_blowup_hint = 1.0;
  double cfl_safety = 0.5;
  double dissipation_coeff = 0.01;
  // Each open edge moves inward at this multiple of the fastest incoming
  // characteristic speed; 0 disables excision (edges stay fixed).
  double excision_safety = 1.02;
  StopConditions stop;
  // Record a field snapshot every this many steps (0: only initial and final).
  int snapshot_every = 0;

  void validate() const;
};

// (u, p = u_t, q = u_x or u_r) on a fixed grid. Only nodes lo..hi are live;
// cone excision moves lo and hi inward over time.
struct EvolutionState {
  Grid1D grid;
  double t = 0.0;
  std::vector<double> u, p, q;
  int lo = 0;
  int hi = 0;
  double min_discriminant = 0.0;
  // Continuous edge positions; lo and hi are the nodes inside them.
  double x_left = 0.0;
  double x_right = 0.0;

  int active_nodes() const { return hi - lo + 1; }
  void refresh_min_discriminant();
};

// State from explicit arrays. Checks finiteness, array sizes, and that q is a
// derivative of u to within ten times the central-difference error bound.
EvolutionState make_state(const Grid1D& grid, double t, std::vector<double> u, std::vector<double> p,
                          std::vector<double> q);

// Samples a closed-form family at time t. For membrane families the grid
// coordinate is used as the (signed) radius.
EvolutionState state_from_closed_form(const ClosedFormSolution& sol, const Grid1D& grid, double t);

struct CharacteristicSpeeds {
  double plus;
  double minus;
};

// Roots of (1 + q^2) lambda^2 + 2 p q lambda - (1 - p^2) = 0, i.e.
// (-p q +- sqrt(1 - p^2 + q^2)) / (1 + q^2). Throws DegeneracyError when the
// discriminant is negative.
CharacteristicSpeeds characteristic_speeds(double p, double q);

struct Rates {
  std::vector<double> u, p, q;  // same length as the active range
};

// Time derivatives on the active range. Central differences inside, a
// third-order one-sided closure at excised edges, parity ghosts at the axis.
Rates rhs(const EvolutionConfig& config, const EvolutionState& state);

// dt from the CFL condition over the active nodes.
double stable_dt(const EvolutionConfig& config, const EvolutionState& state);

struct StepOutcome {
  EvolutionState state;
  double dt = 0.0;
  // RK4-weighted time integral over the step of the momentum flux at the two
  // edges of the active range.
  double flux_left = 0.0;
  double flux_right = 0.0;
  // Momentum carried by nodes removed by excision during this step.
  double removed_momentum = 0.0;
};

// One RK4 step of size dt followed by excision of nodes outside the moving
// edges. Throws NonFiniteError naming the grid location of a bad rate.
StepOutcome step(const EvolutionConfig& config, const EvolutionState& state, double dt);

enum class Termination { ReachedEnd, MaxGradient, DegeneracyFloor, StepFloor, DomainCollapsed, NonFinite };

std::string to_string(Termination t);

struct DiagnosticRow {
  double t;
  double sup_q;
  // q at x = 0 for Born-Infeld; u_rr at r = 0 for the membrane.
  double q_at_origin;
  double min_discriminant;
  double momentum_integral;
  // momentum_integral + removed momentum - integrated boundary flux
  double momentum_corrected;
};

struct Snapshot {
  double t;
  std::vector<double> x, u, p, q;
};

struct EvolutionResult {
  explicit EvolutionResult(EvolutionState start) : final_state(std::move(start)) {}

  std::vector<DiagnosticRow> diagnostics;
  std::vector<Snapshot> snapshots;
  EvolutionState final_state;
  Termination termination = Termination::ReachedEnd;
  std::string message;
  long steps = 0;
};

EvolutionResult evolve(const EvolutionState& initial, const EvolutionConfig& config);

// Momentum density weight: 1 for Born-Infeld, |r| for the membrane.
double momentum_weight(const EvolutionConfig& config, double x);

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticRow>& rows);
void write_snapshots_csv(std::ostream& out, const std::vector<Snapshot>& snapshots);

struct BlowupFit {
  double fitted_exponent = 0.0;
  double fitted_amplitude = 0.0;
  FitResult fit;
  std::pair<double, double> window;
};

// Fits |g_i| ~ A (T - t_i)^-e over t_i in [window.first, window.second].
BlowupFit fit_blowup_rate(const std::vector<double>& t, const std::vector<double>& g, double T,
                          std::pair<double, double> window);

BlowupFit fit_blowup_rate(const std::vector<DiagnosticRow>& rows, double T, std::pair<double, double> window);

// The exact sphere background is lightlike (discriminant identically 0), so it
// cannot be time-stepped. This samples it on the grid over three time levels
// around t and reports the discrete residual of the radial equation from
// central differences, together with the sampled discriminant.
struct BackgroundDiagnosis {
  ResidualReport residual;
  double max_abs_discriminant = 0.0;
};

BackgroundDiagnosis diagnose_exact_background(const ClosedFormSolution& sol, const Grid1D& grid, double t,
                                              double dt);

}  // namespace zmc
