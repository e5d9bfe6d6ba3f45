#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "heis4/evolution.hpp"
#include "heis4/metric.hpp"
#include "heis4/solutions.hpp"

using namespace heis4;

namespace {

// Reference wall positions below were computed independently at 40-digit
// precision from the flow-time integrals of the profile rates.
const double kWallNegL1 = 0.526605941407871289;   // eps*lambda = -1, l = 1
const double kWallPosHi = 0.219774609082816693;   // eps*lambda = +3, forward
const double kWallPosLo = -0.700376575427793422;  // eps*lambda = +3, backward

SolutionSpec family_spec(Family f, double lambda = 0.0, int branch = 1) {
  SolutionSpec s;
  s.family = f;
  s.lambda = lambda;
  s.branch = branch;
  return s;
}

}  // namespace

TEST_CASE("termination vocabulary") {
  CHECK(std::string(termination_name(Termination::ReachedSpan)) == "reached-span");
  CHECK(std::string(termination_name(Termination::DomainBoundary)) == "domain-boundary");
  CHECK(std::string(termination_name(Termination::SingularSlope)) == "singular-slope");
  CHECK(std::string(termination_name(Termination::StepUnderflow)) == "step-underflow");
}

TEST_CASE("integrate_flow: stop classification") {
  // A plain decay with an event named "singular:*" reports SingularSlope.
  OdeRhs decay = [](double, const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = -y[0];
  };
  std::vector<OdeEventSpec> singular;
  singular.push_back(
      {"singular:half", [](double, const std::vector<double>& y) { return y[0] - 0.5; }, -1});
  Trajectory tr = integrate_flow(decay, {1.0}, 0.0, 5.0, {}, singular);
  CHECK(tr.termination == Termination::SingularSlope);
  CHECK(tr.boundary == "singular:half");
  // The crossing of e^{-t} = 1/2 is at t = log 2; localization within 1e-10.
  CHECK(std::abs(tr.ode.t_back() - std::log(2.0)) < 1e-10);

  // Any other event name reports DomainBoundary.
  std::vector<OdeEventSpec> boundary;
  boundary.push_back(
      {"boundary:half", [](double, const std::vector<double>& y) { return y[0] - 0.5; }, -1});
  tr = integrate_flow(decay, {1.0}, 0.0, 5.0, {}, boundary);
  CHECK(tr.termination == Termination::DomainBoundary);
  CHECK(tr.boundary == "boundary:half");

  // Exhausting the step budget is reported as StepUnderflow with a marker.
  OdeOptions opt;
  opt.max_steps = 3;
  tr = integrate_flow(decay, {1.0}, 0.0, 5.0, opt, {});
  CHECK(tr.termination == Termination::StepUnderflow);
  CHECK(tr.boundary == "max-steps");

  // No events, full span.
  tr = integrate_flow(decay, {1.0}, 0.0, 1.0, {}, {});
  CHECK(tr.termination == Termination::ReachedSpan);
  CHECK(tr.ode.t_back() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("first-order branch field integrates the stationary ray") {
  // From (1,1) at eps*lambda = -6 the branch field follows a = e^{-2 dt},
  // b = e^{-dt}.
  OdeRhs ray = [](double, const std::vector<double>& y, std::vector<double>& dy) {
    const QkRates r = qk_timelike_rhs(y[0], y[1], 1.0, -6.0, 1);
    dy[0] = r.a_rate;
    dy[1] = r.b_rate;
  };
  Trajectory tr = integrate_flow(ray, {1.0, 1.0}, 0.0, 1.0);
  REQUIRE(tr.termination == Termination::ReachedSpan);
  double worst = 0.0;
  const auto& ts = tr.ode.times();
  const auto& ys = tr.ode.states();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    worst = std::max(worst, std::abs(ys[i][0] - std::exp(-2.0 * ts[i])));
    worst = std::max(worst, std::abs(ys[i][1] - std::exp(-ts[i])));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("second-order evolution system reproduces closed-form jets") {
  // dy from the einstein_flow_rhs at closed-form states must match the
  // second derivatives of the catalog entries, including at times beyond the
  // resolvent-label migration points.
  struct Probe {
    Family family;
    double lambda;
    int branch;
    std::vector<double> times;
  };
  const std::vector<Probe> probes = {
      {Family::NegativeTimelike, -1.0, 1, {-1.5, -0.3, 0.15, 0.45}},
      {Family::NegativeTimelike, -100.0, 2, {-1.0, -0.25, -0.02, 0.05}},
      {Family::NegativeTimelike, -100.0, 3, {-0.8, 0.03, 0.10, 0.15}},
      {Family::PositiveTimelike, 3.0, 1, {-0.55, -0.2, 0.1, 0.2}},
      {Family::NegativeSpacelike, -3.0, 1, {-0.15, 0.0, 0.3, 0.6}},
      {Family::PositiveSpacelike, 100.0, 2, {-0.05, 0.02, 0.5, 1.0}},
  };
  for (const auto& p : probes) {
    CAPTURE(static_cast<int>(p.family));
    CAPTURE(p.lambda);
    CAPTURE(p.branch);
    const Solution sol = make_solution(family_spec(p.family, p.lambda, p.branch));
    const OdeRhs rhs = einstein_flow_rhs(sol.evolution.labeling, sol.spec.eps, sol.spec.k,
                                         sol.lambda);
    for (double t : p.times) {
      CAPTURE(t);
      const double a = sol.evolution.a(t);
      const double b = sol.evolution.b(t);
      std::vector<double> y{a, b, sol.evolution.a.deriv(t), sol.evolution.b.deriv(t)}, dy(4);
      rhs(t, y, dy);
      const double app = sol.evolution.a.deriv(t, 2);
      const double bpp = sol.evolution.b.deriv(t, 2);
      CHECK(std::abs(dy[2] - app) < 1e-8 * std::max(1.0, std::abs(app)));
      CHECK(std::abs(dy[3] - bpp) < 1e-8 * std::max(1.0, std::abs(bpp)));
    }
  }
}

namespace {

struct CrosscheckCase {
  const char* tag;
  SolutionSpec spec;
  // window expectations
  Termination fwd, bwd;
  double t_hi_lo, t_hi_hi;  // admissible window for the realized t_hi
  double t_lo_lo, t_lo_hi;  // admissible window for the realized t_lo
};

std::vector<CrosscheckCase> acceptance_cases() {
  std::vector<CrosscheckCase> cs;
  const auto D = Termination::DomainBoundary;
  const auto R = Termination::ReachedSpan;
  cs.push_back({"neg-timelike l=1", family_spec(Family::NegativeTimelike, -1.0, 1), D, R,
                kWallNegL1 - 6e-3, kWallNegL1, -2.0, -2.0});
  cs.push_back({"neg-timelike l=2", family_spec(Family::NegativeTimelike, -100.0, 2), D, R,
                0.06, 0.0803243, -2.0, -2.0});
  cs.push_back({"neg-timelike l=3", family_spec(Family::NegativeTimelike, -100.0, 3), D, R,
                0.15, 0.177168, -2.0, -2.0});
  cs.push_back({"pos-timelike", family_spec(Family::PositiveTimelike, 3.0), D, D,
                kWallPosHi - 6e-3, kWallPosHi, kWallPosLo, kWallPosLo + 5e-2});
  cs.push_back({"neg-spacelike", family_spec(Family::NegativeSpacelike, -3.0), D, D,
                -kWallPosLo - 5e-2, -kWallPosLo, -kWallPosHi, -kWallPosHi + 6e-3});
  cs.push_back({"pos-spacelike l=2", family_spec(Family::PositiveSpacelike, 100.0, 2), R, D,
                2.0, 2.0, -0.0803243, -0.06});
  cs.push_back({"pos-spacelike l=3", family_spec(Family::PositiveSpacelike, 100.0, 3), R, D,
                2.0, 2.0, -0.177168, -0.15});
  cs.push_back({"stationary timelike", family_spec(Family::StationaryTimelike), R, R,
                2.0, 2.0, -2.0, -2.0});
  cs.push_back({"stationary spacelike", family_spec(Family::StationarySpacelike), R, R,
                2.0, 2.0, -2.0, -2.0});
  cs.push_back({"hk timelike", family_spec(Family::HyperKahlerTimelike), R, D,
                2.0, 2.0, -1.0 / 3.0, -1.0 / 3.0 + 5e-3});
  cs.push_back({"hk spacelike", family_spec(Family::HyperKahlerSpacelike), D, R,
                1.0 / 3.0 - 5e-3, 1.0 / 3.0, -2.0, -2.0});
  cs.push_back({"hk lightlike", family_spec(Family::HyperKahlerLightlike), R, R,
                2.0, 2.0, -2.0, -2.0});
  cs.push_back({"lightlike positive", family_spec(Family::LightlikePositive, 3.0), R, R,
                2.0, 2.0, -2.0, -2.0});
  cs.push_back({"lightlike lorentzian", family_spec(Family::LightlikeLorentzian, -3.0), R, R,
                2.0, 2.0, -2.0, -2.0});
  return cs;
}

}  // namespace

TEST_CASE("crosscheck: every family against its closed form over span 2") {
  for (const auto& c : acceptance_cases()) {
    CAPTURE(c.tag);
    const CrosscheckReport r = crosscheck(c.spec, 2.0);
    CHECK(r.max_deviation < 1e-7);
    CHECK(r.forward == c.fwd);
    CHECK(r.backward == c.bwd);
    CHECK(r.t_hi >= c.t_hi_lo);
    CHECK(r.t_hi <= c.t_hi_hi + 1e-12);
    CHECK(r.t_lo >= c.t_lo_lo - 1e-12);
    CHECK(r.t_lo <= c.t_lo_hi);
    CHECK(r.nodes > 5);
    // Conserved-multiplier residual stays below 1e-8 on legs that ran the
    // full span; boundary-clipped legs are reported but not bound by it.
    if (r.forward == Termination::ReachedSpan) CHECK(r.forward_drift < 1e-8);
    if (r.backward == Termination::ReachedSpan) CHECK(r.backward_drift < 1e-8);
    // Observed headroom: drift stays small even on clipped legs.
    CHECK(r.max_constraint_drift < 1e-7);
  }
}

TEST_CASE("crosscheck: the s=-1 resolvent branches ride through label migration") {
  // The fixed-label first-order field fails mid-orbit on these flows (the
  // resolvent label migrates); the second-order system must not notice.
  for (int l : {2, 3}) {
    CAPTURE(l);
    const CrosscheckReport r =
        crosscheck(family_spec(Family::NegativeTimelike, -100.0, l), 2.0);
    CHECK(r.max_deviation < 1e-7);
    CHECK(r.backward == Termination::ReachedSpan);
    CHECK(r.backward_drift < 1e-8);
  }
}

TEST_CASE("crosscheck: tightening tolerances reduces deviation") {
  for (const auto& c : acceptance_cases()) {
    CAPTURE(c.tag);
    const CrosscheckReport loose = crosscheck(c.spec, 1.0, 1e-8, 1e-10);
    const CrosscheckReport tight = crosscheck(c.spec, 1.0, 1e-10, 1e-12);
    CHECK(tight.max_deviation <= std::max(1e-11, 1.2 * loose.max_deviation));
  }
}

TEST_CASE("crosscheck: rejects degenerate spans") {
  CHECK_THROWS_AS(crosscheck(family_spec(Family::StationaryTimelike), 0.0), DomainError);
  CHECK_THROWS_AS(crosscheck(family_spec(Family::StationaryTimelike), -1.0), DomainError);
}

TEST_CASE("rho flow: stationary reduction is a pure exponential") {
  // gamma = 0 collapses the rate to 2 k rho.
  RhoFlow flow = make_rho_flow(family_spec(Family::NegativeTimelike, -6.0, 1));
  CHECK(flow.profile.gamma == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(flow.rho(flow.t0) == doctest::Approx(0.5).epsilon(1e-14));
  for (double t : {-0.5, 0.25, 1.0}) {
    CAPTURE(t);
    const double want = 0.5 * std::exp(2.0 * t);
    CHECK(std::abs(flow.rho(t) - want) < 1e-8);
    // Analytic inverse of the reduced flow.
    CHECK(std::abs(flow.time_of_rho(want) - t) < 1e-8);
  }
  for (double rho : {0.2, 0.5, 2.0}) {
    CAPTURE(rho);
    CHECK(std::abs(flow.time_of_rho(rho) - 0.5 * std::log(2.0 * rho)) < 1e-8);
  }
}

TEST_CASE("rho flow: round trips, monotonicity, and chart walls") {
  const SolutionSpec spec = family_spec(Family::NegativeTimelike, -1.0, 1);
  RhoFlow flow = make_rho_flow(spec);
  // Chart is (-2 gamma, inf) with the finite flow-time wall on the left.
  CHECK(flow.profile.gamma < 0.0);

  double prev_rho = 0.0;
  for (double t : {-0.4, 0.3, 1.0}) {
    CAPTURE(t);
    const double rho = flow.rho(t);
    CHECK(rho > prev_rho);  // the rate is positive
    CHECK(std::abs(flow.time_of_rho(rho) - t) < 1e-8);
    prev_rho = rho;
  }

  // The flow-time wall sits at -0.5266...; beyond it the chart is empty.
  CHECK_THROWS_AS(flow.rho(-0.8), DomainError);
  // rho below the chart floor -2 gamma = 0.75.
  CHECK_THROWS_AS(flow.time_of_rho(0.5), DomainError);

  // Free-function forms agree with the member calls.
  CHECK(rho_of_time(spec, 0.3) == doctest::Approx(flow.rho(0.3)).epsilon(1e-12));
  CHECK(time_of_rho(spec, prev_rho) == doctest::Approx(flow.time_of_rho(prev_rho)).epsilon(1e-12));
}

TEST_CASE("rho flow: only root-profile families carry one") {
  CHECK_THROWS_AS(make_rho_flow(family_spec(Family::HyperKahlerTimelike)), DomainError);
  CHECK_THROWS_AS(make_rho_flow(family_spec(Family::LightlikePositive, 3.0)), DomainError);
}

TEST_CASE("lightlike system: slope singularity is reported, not crossed") {
  const OdeRhs rhs = lightlike_flow_rhs(-3.0);
  std::vector<double> y{1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, dy(7);
  CHECK_THROWS_AS(rhs(0.0, y, dy), SingularSlopeError);
}
