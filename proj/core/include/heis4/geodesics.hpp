#pragma once

#include <array>
#include <string>
#include <vector>

#include "heis4/linalg.hpp"
#include "heis4/metric.hpp"
#include "heis4/ode.hpp"
#include "heis4/solutions.hpp"

namespace heis4 {

// Affinely parametrized geodesic data: a chart point and the velocity there.
struct GeodesicState {
  Vec4<double> point{};
  Vec4<double> velocity{};
};

// Gamma^l_{mn} assembled from a single first-derivative metric evaluation.
Ten3<double> christoffel_at(const MetricField& g, const Vec4<double>& p);

// g(v, v) at the state's point; constant along geodesics.
double metric_speed(const MetricField& g, const GeodesicState& s);

// The geodesic equation x'' = -Gamma(x', x') as a first-order system on
// (point, velocity).
std::array<double, 8> geodesic_rhs(const MetricField& g, const GeodesicState& s);

// One integrated geodesic; the affine parameter runs from 0 to span (either
// sign). Steps that poke outside the metric domain are rejected and retried
// smaller, so the run stops cleanly at walls instead of dying on them.
struct GeodesicLeg {
  OdeSolution path;            // 8-state rows (point, velocity)
  double affine_span = 0.0;    // |parameter| actually covered
  double speed_initial = 0.0;  // g(v, v) at launch
  double speed_drift = 0.0;    // max |g(v,v) - initial| per unit affine span,
                               // relative to the largest contraction scale met
  bool event_fired = false;
  std::string boundary;        // event name when event_fired
};

GeodesicLeg integrate_geodesic(const MetricField& g, const GeodesicState& start, double span,
                               const std::vector<OdeEventSpec>& events = {},
                               const OdeOptions& options = {});

GeodesicState state_at(const GeodesicLeg& leg, double tau);

// Proper length of the normal curve between two chart values: rho values for
// the root-profile families, t values otherwise. Endpoints may sit on the
// domain walls; a wall whose approach is non-integrable reports infinity.
double normal_length(const SolutionSpec& spec, double from, double to);

enum class ProbeVerdict { IncompleteEvidence, NoFiniteBoundaryFound };
const char* probe_verdict_name(ProbeVerdict v);

// One probe leg: a distinguished curve launched toward a candidate boundary.
struct ProbeLeg {
  std::string target;
  bool boundary_reached = false;  // stopped at a wall with finite remaining length
  double affine_span = 0.0;
  double length = 0.0;     // proper length, including the collar tail at walls
  double speed_drift = 0.0;
  double kretschmann_growth = 0.0;  // log10 of |K| amplification along the leg
  double degeneration = 0.0;        // |log10| of the det g drift along the leg
};

struct ProbeResult {
  ProbeVerdict verdict = ProbeVerdict::NoFiniteBoundaryFound;
  bool conjectural = false;  // evidence supports a conjecture, not a proved claim
  bool boundary_reached = false;
  double affine_span = 0.0;  // affine parameter across the reported legs
  double length = 0.0;       // proper length across the reported legs
  double speed_drift = 0.0;  // worst leg
  std::vector<double> kretschmann_trace;  // samples along the decisive leg
  std::vector<ProbeLeg> legs;
  std::string note;
};

// Integrates the distinguished boundary-reaching curves of the family.
// IncompleteEvidence requires a finite-length arrival at a wall together with
// curvature blow-up or metric degeneration there.
ProbeResult incompleteness_probe(const SolutionSpec& spec);

}  // namespace heis4
