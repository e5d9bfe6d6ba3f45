#pragma once

#include <array>
#include <complex>
#include <memory>
#include <string_view>
#include <vector>

#include "heis4/frame_evolution.hpp"
#include "heis4/jet.hpp"
#include "heis4/metric.hpp"

namespace heis4 {

// Catalog of the homogeneous-slice Einstein families. "Timelike", "Spacelike"
// and "Lightlike" name the causal type of the center direction inside the
// slice; Negative/Positive refer to the sign of eps*lambda driving the
// root-profile families.
enum class Family {
  StationaryTimelike,
  StationarySpacelike,
  NegativeTimelike,
  PositiveTimelike,
  NegativeSpacelike,
  PositiveSpacelike,
  LightlikePositive,
  LightlikeLorentzian,
  HyperKahlerTimelike,
  HyperKahlerSpacelike,
  HyperKahlerLightlike,
};

const char* family_name(Family family);
bool family_from_name(std::string_view name, Family* out);
std::vector<Family> all_families();

struct FamilyTraits {
  CenterLabeling labeling = CenterLabeling::TimelikeOrRiemannian;
  bool lambda_free = false;  // family takes an Einstein constant as input
  bool has_branch = false;   // root label in {1,2,3} selects the profile
  bool eps_free = false;     // slice signature selectable
  int forced_eps = +1;       // applied when !eps_free
  int lambda_sign = 0;       // required sign of the lambda input (0: ignored)
  const char* summary = "";
};
FamilyTraits family_traits(Family family);

struct SolutionSpec {
  Family family = Family::StationaryTimelike;
  double k = 1.0;      // central structure scale, k > 0
  int eps = +1;        // dt^2 coefficient where selectable
  double lambda = 0.0; // Einstein constant input for lambda_free families
  int branch = 1;      // root label for has_branch families
  double t0 = 0.0;     // anchor time where entries take their seed values
};

// ---- quasi-Kahler slope field ----------------------------------------------

// Transverse-scale slope b' picked by root label l at state (a, b); assembled
// from the literal complex resolvent and required to come out real.
double qk_timelike_slope(double a, double b, double k, double epslambda, int l);

struct QkRates {
  double a_rate = 0.0;
  double b_rate = 0.0;
  double beta = 0.0;  // k b^3 - a b'
};
QkRates qk_timelike_rhs(double a, double b, double k, double epslambda, int l);
// Spacelike-center system: time-reflected timelike system at eps*lambda = -lambda.
QkRates qk_spacelike_rhs(double a, double b, double k, double lambda, int l);

// ---- root census ------------------------------------------------------------

// Roots of rho^3 + 3/(4 epslambda k^2) rho - 9/(4 k^2 epslambda^2) = 0 tagged
// by label, with the derived offset gamma and domain validity.
struct RhoRoot {
  int label = 0;
  std::complex<double> value{0.0, 0.0};
  bool real = false;
  double rho0 = 0.0;
  double gamma = 0.0;
  int sign = +1;          // orientation sign of the associated profile
  bool valid = false;     // real root whose profile interval is nonempty
  bool coincident = false;
  double residual = 0.0;  // |cubic(value)|
};
std::array<RhoRoot, 3> cubic_rho_roots(double k, double epslambda);
double gamma_of_rho0(double rho0, double epslambda);

// ---- root profile -----------------------------------------------------------

// Data of one root flow: scale functions A (center), B (transverse) and the
// flow rate drho/dsigma, all rational-sqrt expressions in rho.
struct OneLoopProfile {
  double k = 1.0;
  double epslambda = -6.0;  // effective value driving the profile
  bool positive_type = false;
  int l = 1;
  int s = +1;
  int d = -1;  // frame entries read the flow at sigma = d * (t - t0)
  double rho0 = 0.0;
  double gamma = 0.0;
  double rho_lo = 0.0;
  double rho_hi = 0.0;    // open chart interval (may be +-inf or 0)
  double sigma_lo = 0.0;  // flow time to reach rho_lo (negative, may be -inf)
  double sigma_hi = 0.0;  // flow time to reach rho_hi (positive, may be +inf)
};

OneLoopProfile one_loop_profile(double k, double epslambda_eff, int l);

template <class S>
S profile_A(const OneLoopProfile& pr, const S& rho) {
  using std::sqrt;
  const double g = pr.gamma;
  if (pr.positive_type) {
    const double c = pr.k * sqrt(2.0 * pr.epslambda / 3.0);
    return c * rho * sqrt(-((rho + 2.0 * g) / (rho + g)));
  }
  const double c = pr.s * pr.k * sqrt(-2.0 * pr.epslambda / 3.0);
  return c * rho * sqrt((rho + 2.0 * g) / (rho + g));
}

template <class S>
S profile_B(const OneLoopProfile& pr, const S& rho) {
  using std::sqrt;
  const double g = pr.gamma;
  if (pr.positive_type) {
    const double c = sqrt(pr.epslambda / 3.0);
    return c * rho / sqrt(-(rho + 2.0 * g));
  }
  const double c = pr.s * sqrt(-pr.epslambda / 3.0);
  return c * rho / sqrt(rho + 2.0 * g);
}

template <class S>
S profile_rate(const OneLoopProfile& pr, const S& rho) {
  using std::sqrt;
  const double g = pr.gamma;
  if (pr.positive_type) {
    const double c = sqrt(2.0 * pr.epslambda / 3.0);
    return c * rho * sqrt(-((rho + g) / (rho + 2.0 * g)));
  }
  const double c = pr.s * sqrt(-2.0 * pr.epslambda / 3.0);
  return c * rho * sqrt((rho + g) / (rho + 2.0 * g));
}

// Monotone flow sigma -> rho(sigma) with rho(0) = rho0. Values invert the
// quadrature sigma(rho) = integral of drho/rate, so the flow is independent
// of the Runge-Kutta machinery it is later checked against.
class RhoPath {
 public:
  explicit RhoPath(const OneLoopProfile& profile);
  const OneLoopProfile& profile() const { return profile_; }
  double sigma_of_rho(double rho) const;
  double rho_of_sigma(double sigma) const;
  // Taylor expansion of the flow at sigma, to order 3, via Picard iteration.
  Taylor4 rho_series(double sigma) const;

 private:
  OneLoopProfile profile_;
  mutable std::vector<std::pair<double, double>> cache_;  // (sigma, rho) sorted
};

// ---- lightlike-center evolution system ---------------------------------------

// State layout (a, b, f, p, b', f', p'); mu = eps*lambda. The center scale obeys
// the first-order constraint a' = a(-mu b/b' - b'/(4b)).
std::array<double, 7> lightlike_rhs(const std::array<double, 7>& y, double mu);
// Max absolute residual of the five lightlike evolution equations at t, using
// division-free forms so constant-b (flat) entries are handled.
double lightlike_residual(const FrameEvolution& ev, double lambda, double t);

// ---- assembled solutions ------------------------------------------------------

struct Solution {
  SolutionSpec spec;      // normalized spec (forced eps etc. applied)
  double lambda = 0.0;    // Einstein constant of the produced metric
  FrameEvolution evolution;
  Metric metric;  // t-chart metric
  std::shared_ptr<const RhoPath> path;  // root-profile families only
  bool has_rho_chart = false;
  int flow_direction = +1;  // sign d in t = t0 + d * sigma along the profile
  Metric rho_metric;  // exact rho-chart metric (root-profile families)
  double rho_sample_lo = 0.0, rho_sample_hi = 0.0;  // interior sampling window
  double t_sample_lo = 0.0, t_sample_hi = 0.0;
};

Solution make_solution(const SolutionSpec& spec);

}  // namespace heis4
