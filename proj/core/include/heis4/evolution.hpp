#pragma once

#include <memory>
#include <string>
#include <vector>

#include "heis4/frame_evolution.hpp"
#include "heis4/ode.hpp"
#include "heis4/solutions.hpp"

namespace heis4 {

// Why an integration leg ended.
enum class Termination { ReachedSpan, DomainBoundary, SingularSlope, StepUnderflow };

const char* termination_name(Termination r);

// One adaptive integration leg: the accepted-node skeleton plus the reason the
// leg stopped and, when an event ended it, the event's name.
struct Trajectory {
  OdeSolution ode;
  Termination termination = Termination::ReachedSpan;
  std::string boundary;
};

// integrate() with the stop reason folded into the Trajectory vocabulary:
// events whose name starts with "singular" report SingularSlope, every other
// event reports DomainBoundary.
Trajectory integrate_flow(const OdeRhs& rhs, std::vector<double> y0, double t0, double t1,
                          const OdeOptions& options = {},
                          const std::vector<OdeEventSpec>& events = {});

// ---- first-order systems for the catalog flows ------------------------------

// Evolution system for the diagonal center flows in the state (a, b, a', b').
// The second derivatives are solved pointwise from the (t,t) and (z,z)
// components of the Einstein equation, evaluated through the curvature engine
// on a local quadratic-in-time frame evolution; both center labelings share
// this construction, and no root labeling enters the right-hand side (the
// branch only selects the initial slope).
OdeRhs einstein_flow_rhs(CenterLabeling labeling, int eps, double k, double lambda);

// Full lightlike system in the state (a, b, f, p, b', f', p') with
// mu = eps * lambda; throws SingularSlopeError if evaluated at b' = 0.
OdeRhs lightlike_flow_rhs(double mu);

// Parallel Kahler-form systems. Timelike (mirror = +1): state (a, b, c) with
// a' = k b c, b'/b = c'/c = -k b c / a; the spacelike flow (mirror = -1)
// flips the sign of k. The lightlike variant evolves (a, b, f, p) with
// f' = -2 k a b as the only nonzero rate.
OdeRhs hk_flow_rhs(double k, int mirror);
OdeRhs hk_lightlike_flow_rhs(double k);

// Scale-collapse floors on the first two state entries plus a blow-up guard
// on the whole state; every flow above keeps (a, b) in front, so these events
// apply uniformly. The ceiling is deliberately moderate: derivative entries
// blow up one power faster than the coefficients near a domain wall, so the
// guard ends the leg while both the integration and the closed-form
// evaluation still hold full precision.
std::vector<OdeEventSpec> scale_guard_events(double floor_value = 1e-7, double ceiling = 1e3);

// ---- root-profile flow -------------------------------------------------------

// The root profile rho as the solution of d(rho)/dt = rate(rho) > 0 anchored
// at rho(t0) = rho0, integrated adaptively; the inverse map comes from the
// quadrature path, so a round trip crosses the two constructions. Flow time
// relates to the catalog parametrization by t_catalog = t0 + d * (t - t0)
// with d the solution's flow_direction.
struct RhoFlow {
  OneLoopProfile profile;
  std::shared_ptr<const RhoPath> path;
  double t0 = 0.0;
  double rtol = 1e-10;
  double atol = 1e-12;

  double rho(double t) const;          // adaptive integration from the anchor
  double time_of_rho(double rho) const;  // t0 + quadrature flow time
};

RhoFlow make_rho_flow(const SolutionSpec& spec);
double rho_of_time(const SolutionSpec& spec, double t);
double time_of_rho(const SolutionSpec& spec, double rho);

// ---- closed-form crosscheck ---------------------------------------------------

// Integrates the family's evolution system from the anchor data in both time
// directions (each leg clipped by events or the requested span) and compares
// every accepted node against the closed-form entries. Deviations are
// measured per entry as |difference| / max(1, |closed form|).
struct CrosscheckReport {
  SolutionSpec spec;
  double span = 0.0;               // requested per-direction span
  double t_lo = 0.0, t_hi = 0.0;   // realized window around t0
  double max_deviation = 0.0;
  double max_constraint_drift = 0.0;  // family's conserved-quantity residual
  double forward_drift = 0.0;         // same residual, forward leg only
  double backward_drift = 0.0;        // same residual, backward leg only
  Termination forward = Termination::ReachedSpan;
  Termination backward = Termination::ReachedSpan;
  std::string forward_boundary;
  std::string backward_boundary;
  long nodes = 0;
};

CrosscheckReport crosscheck(const SolutionSpec& spec, double span, double rtol = 1e-10,
                            double atol = 1e-12);

}  // namespace heis4
