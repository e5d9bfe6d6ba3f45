#include "heis4/evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "heis4/curvature.hpp"
#include "heis4/metric.hpp"

namespace heis4 {

const char* termination_name(Termination r) {
  switch (r) {
    case Termination::ReachedSpan: return "reached-span";
    case Termination::DomainBoundary: return "domain-boundary";
    case Termination::SingularSlope: return "singular-slope";
    case Termination::StepUnderflow: return "step-underflow";
  }
  return "unknown";
}

Trajectory integrate_flow(const OdeRhs& rhs, std::vector<double> y0, double t0, double t1,
                          const OdeOptions& options, const std::vector<OdeEventSpec>& events) {
  Trajectory tr{integrate(rhs, std::move(y0), t0, t1, options, events), Termination::ReachedSpan,
                {}};
  switch (tr.ode.stop()) {
    case OdeStop::ReachedEnd:
      tr.termination = Termination::ReachedSpan;
      break;
    case OdeStop::Event: {
      if (auto hit = tr.ode.event()) tr.boundary = hit->name;
      tr.termination = tr.boundary.rfind("singular", 0) == 0 ? Termination::SingularSlope
                                                             : Termination::DomainBoundary;
      break;
    }
    case OdeStop::StepUnderflow:
      tr.termination = Termination::StepUnderflow;
      break;
    case OdeStop::MaxSteps:
      tr.termination = Termination::StepUnderflow;
      tr.boundary = "max-steps";
      break;
    case OdeStop::NonFinite:
      tr.termination = Termination::DomainBoundary;
      tr.boundary = "nonfinite";
      break;
  }
  return tr;
}

namespace {

// Entry with prescribed value and first two derivatives at tc; the curvature
// engine only ever reads the 2-jet of the coefficients at the sample time.
TimeFunction quad_entry(double tc, double value, double d1, double d2) {
  return TimeFunction([tc, value, d1, d2](const Taylor4& t) {
    const Taylor4 dt = t - tc;
    return value + dt * d1 + dt * dt * (0.5 * d2);
  });
}

struct EinsteinPair {
  double r00, r33;
};

// (t,t) and (z,z) components of Ric - lambda g for the diagonal flow with
// entries frozen to a quadratic jet at time t. Both components depend on the
// second derivatives (a'', b'') affinely, which the right-hand side below
// exploits to solve for them.
EinsteinPair einstein_components(CenterLabeling labeling, int eps, double k, double lambda,
                                 double t, double a, double b, double u, double v, double app,
                                 double bpp) {
  FrameEvolution fe;
  fe.labeling = labeling;
  fe.eps = eps;
  fe.k = k;
  fe.t0 = t;
  fe.a = quad_entry(t, a, u, app);
  fe.b = quad_entry(t, b, v, bpp);
  fe.c = quad_entry(t, b, v, bpp);
  const Metric m = metric_from_evolution(fe);
  const CurvatureData<double> c = curvature_at(m.field(), Vec4<double>{t, 0.0, 0.0, 0.0});
  return {c.ricci[0][0] - lambda * c.g[0][0], c.ricci[3][3] - lambda * c.g[3][3]};
}

}  // namespace

OdeRhs einstein_flow_rhs(CenterLabeling labeling, int eps, double k, double lambda) {
  return [labeling, eps, k, lambda](double t, const std::vector<double>& y,
                                    std::vector<double>& dy) {
    const double a = y[0], b = y[1], u = y[2], v = y[3];
    const EinsteinPair base =
        einstein_components(labeling, eps, k, lambda, t, a, b, u, v, 0.0, 0.0);
    const EinsteinPair ina =
        einstein_components(labeling, eps, k, lambda, t, a, b, u, v, 1.0, 0.0);
    const EinsteinPair inb =
        einstein_components(labeling, eps, k, lambda, t, a, b, u, v, 0.0, 1.0);
    const double ca0 = ina.r00 - base.r00, cb0 = inb.r00 - base.r00;
    const double ca3 = ina.r33 - base.r33, cb3 = inb.r33 - base.r33;
    const double det = ca0 * cb3 - cb0 * ca3;
    dy[0] = u;
    dy[1] = v;
    dy[2] = (-base.r00 * cb3 + base.r33 * cb0) / det;
    dy[3] = (-base.r33 * ca0 + base.r00 * ca3) / det;
  };
}

OdeRhs lightlike_flow_rhs(double mu) {
  return [mu](double, const std::vector<double>& y, std::vector<double>& dy) {
    std::array<double, 7> s;
    std::copy_n(y.begin(), 7, s.begin());
    const std::array<double, 7> d = lightlike_rhs(s, mu);
    std::copy(d.begin(), d.end(), dy.begin());
  };
}

OdeRhs hk_flow_rhs(double k, int mirror) {
  const double km = k * mirror;
  return [km](double, const std::vector<double>& y, std::vector<double>& dy) {
    const double a = y[0], b = y[1], c = y[2];
    dy[0] = km * b * c;
    dy[1] = -km * b * b * c / a;
    dy[2] = -km * b * c * c / a;
  };
}

OdeRhs hk_lightlike_flow_rhs(double k) {
  return [k](double, const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = 0.0;
    dy[1] = 0.0;
    dy[2] = -2.0 * k * y[0] * y[1];
    dy[3] = 0.0;
  };
}

std::vector<OdeEventSpec> scale_guard_events(double floor_value, double ceiling) {
  std::vector<OdeEventSpec> ev;
  ev.push_back({"boundary:a",
                [floor_value](double, const std::vector<double>& y) { return y[0] - floor_value; },
                -1});
  ev.push_back({"boundary:b",
                [floor_value](double, const std::vector<double>& y) { return y[1] - floor_value; },
                -1});
  ev.push_back({"boundary:blowup",
                [ceiling](double, const std::vector<double>& y) {
                  double m = 0.0;
                  for (double c : y) m = std::max(m, std::abs(c));
                  return ceiling - m;
                },
                -1});
  return ev;
}

double RhoFlow::rho(double t) const {
  if (t == t0) return profile.rho0;
  const OneLoopProfile pr = profile;
  OdeRhs rhs = [pr](double, const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = profile_rate(pr, y[0]);
  };
  OdeOptions opt;
  opt.rtol = rtol;
  opt.atol = atol;
  const OdeSolution s = integrate(rhs, {profile.rho0}, t0, t, opt);
  if (s.stop() != OdeStop::ReachedEnd)
    throw DomainError("rho flow left its chart before reaching the requested time");
  return s.y_back()[0];
}

double RhoFlow::time_of_rho(double rho) const { return t0 + path->sigma_of_rho(rho); }

RhoFlow make_rho_flow(const SolutionSpec& spec) {
  const Solution sol = make_solution(spec);
  if (!sol.has_rho_chart) throw DomainError("family carries no root profile");
  RhoFlow flow;
  flow.profile = sol.path->profile();
  flow.path = sol.path;
  flow.t0 = sol.spec.t0;
  return flow;
}

double rho_of_time(const SolutionSpec& spec, double t) { return make_rho_flow(spec).rho(t); }

double time_of_rho(const SolutionSpec& spec, double rho) {
  return make_rho_flow(spec).time_of_rho(rho);
}

namespace {

enum class FlowKind { Center, CenterRay, Light, ParallelCenter, ParallelLight };

FlowKind flow_kind(Family f) {
  switch (f) {
    case Family::StationaryTimelike:
    case Family::StationarySpacelike:
      // The stationary rays stay on one resolvent label for all time, so the
      // first-order branch field integrates them directly; this is also the
      // only center flow whose transverse instability would otherwise amplify
      // roundoff through the second-order system.
      return FlowKind::CenterRay;
    case Family::NegativeTimelike:
    case Family::PositiveTimelike:
    case Family::NegativeSpacelike:
    case Family::PositiveSpacelike:
      return FlowKind::Center;
    case Family::LightlikePositive:
    case Family::LightlikeLorentzian:
      return FlowKind::Light;
    case Family::HyperKahlerTimelike:
    case Family::HyperKahlerSpacelike:
      return FlowKind::ParallelCenter;
    case Family::HyperKahlerLightlike:
      return FlowKind::ParallelLight;
  }
  throw DomainError("unknown family");
}

}  // namespace

CrosscheckReport crosscheck(const SolutionSpec& spec_in, double span, double rtol, double atol) {
  if (!(span > 0.0)) throw DomainError("crosscheck span must be positive");
  const Solution sol = make_solution(spec_in);
  const SolutionSpec& spec = sol.spec;
  const FrameEvolution& ev = sol.evolution;
  const double t0 = spec.t0;
  const double k = spec.k;
  const FlowKind kind = flow_kind(spec.family);
  const bool spacelike = ev.labeling == CenterLabeling::Spacelike;

  OdeRhs rhs;
  std::vector<double> y0;
  std::vector<OdeEventSpec> events = scale_guard_events();
  int compare_entries = 2;

  switch (kind) {
    case FlowKind::Center:
      // Generic center flows migrate between resolvent labels, so they are
      // integrated through the second-order evolution system, which carries no
      // label at all; the branch only fixes the initial slopes.
      rhs = einstein_flow_rhs(ev.labeling, spec.eps, k, sol.lambda);
      y0 = {ev.a(t0), ev.b(t0), ev.a.deriv(t0), ev.b.deriv(t0)};
      compare_entries = 2;
      break;
    case FlowKind::CenterRay:
      if (spacelike) {
        const double lam = sol.lambda;
        rhs = [k, lam](double, const std::vector<double>& y, std::vector<double>& dy) {
          const QkRates r = qk_spacelike_rhs(y[0], y[1], k, lam, 1);
          dy[0] = r.a_rate;
          dy[1] = r.b_rate;
        };
      } else {
        const double el = spec.eps * sol.lambda;
        rhs = [k, el](double, const std::vector<double>& y, std::vector<double>& dy) {
          const QkRates r = qk_timelike_rhs(y[0], y[1], k, el, 1);
          dy[0] = r.a_rate;
          dy[1] = r.b_rate;
        };
      }
      y0 = {ev.a(t0), ev.b(t0)};
      compare_entries = 2;
      break;
    case FlowKind::Light:
      rhs = lightlike_flow_rhs(spec.eps * sol.lambda);
      y0 = {ev.a(t0),       ev.b(t0),       ev.f(t0),      ev.p(t0),
            ev.b.deriv(t0), ev.f.deriv(t0), ev.p.deriv(t0)};
      compare_entries = 4;
      events.push_back({"singular:slope",
                        [](double, const std::vector<double>& y) { return y[4]; }, 0});
      break;
    case FlowKind::ParallelCenter:
      rhs = hk_flow_rhs(k, spec.family == Family::HyperKahlerTimelike ? +1 : -1);
      y0 = {ev.a(t0), ev.b(t0), ev.c(t0)};
      compare_entries = 3;
      // This state carries no derivative entries, so guard the rates directly;
      // otherwise the leg rides so deep into the collapse wall that the wall
      // position itself dominates the comparison.
      events.push_back({"boundary:rate",
                        [k](double, const std::vector<double>& y) {
                          const double a = y[0], b = y[1], c = y[2];
                          const double m = std::max(
                              {std::abs(k * b * c), std::abs(k * b * b * c / a),
                               std::abs(k * b * c * c / a)});
                          return 1e3 - m;
                        },
                        -1});
      break;
    case FlowKind::ParallelLight:
      rhs = hk_lightlike_flow_rhs(k);
      y0 = {ev.a(t0), ev.b(t0), ev.f(t0), ev.p(t0)};
      compare_entries = 4;
      break;
  }

  const auto target = [&](int slot, double t) -> double {
    switch (kind) {
      case FlowKind::Center:
      case FlowKind::CenterRay:
        return slot == 0 ? ev.a(t) : ev.b(t);
      case FlowKind::ParallelCenter:
        return slot == 0 ? ev.a(t) : (slot == 1 ? ev.b(t) : ev.c(t));
      default:
        return slot == 0 ? ev.a(t) : slot == 1 ? ev.b(t) : slot == 2 ? ev.f(t) : ev.p(t);
    }
  };

  // Per-family conserved quantity, reported as a scale-free residual.
  const auto drift = [&](const std::vector<double>& y) -> double {
    switch (kind) {
      case FlowKind::Center: {
        const double a = y[0], b = y[1];
        const double veff = spacelike ? -y[3] : y[3];
        const double C = spacelike ? -sol.lambda : spec.eps * sol.lambda;
        const double beta = k * b * b * b - a * veff;
        const double b5 = b * b * b * b * b;
        const double num = 3.0 * beta * beta * beta + C * a * a * b * b * beta +
                           2.0 * k * C * a * a * b5;
        const double den = 3.0 * std::abs(beta * beta * beta) +
                           std::abs(C) * a * a * b * b * std::abs(beta) +
                           2.0 * k * std::abs(C) * a * a * b5;
        return den > 0.0 ? std::abs(num) / den : std::abs(num);
      }
      case FlowKind::CenterRay: {
        // Invert the cubic constraint for the multiplier the state implies and
        // compare with the family's value.
        const double a = y[0], b = y[1];
        const double C = spacelike ? -sol.lambda : spec.eps * sol.lambda;
        const QkRates r = spacelike ? qk_spacelike_rhs(a, b, k, sol.lambda, 1)
                                    : qk_timelike_rhs(a, b, k, C, 1);
        const double b3 = b * b * b;
        const double beta = spacelike ? k * b3 + a * r.b_rate : k * b3 - a * r.b_rate;
        const double chat = -3.0 * beta * beta * beta / (a * a * b * b * (beta + 2.0 * k * b3));
        return std::abs(chat - C) / std::abs(C);
      }
      case FlowKind::Light: {
        const double mu = spec.eps * sol.lambda;
        const double ratio = y[4] / y[1];
        return std::abs(-0.75 * ratio * ratio - mu) / std::abs(mu);
      }
      case FlowKind::ParallelCenter:
        return std::abs(y[0] * y[1] - 1.0);
      case FlowKind::ParallelLight:
        return std::max({std::abs(y[0] - 1.0), std::abs(y[1] - 1.0), std::abs(y[3])});
    }
    return 0.0;
  };

  OdeOptions opt;
  opt.rtol = rtol;
  opt.atol = atol;

  CrosscheckReport rep;
  rep.spec = spec;
  rep.span = span;

  const Trajectory fwd = integrate_flow(rhs, y0, t0, t0 + span, opt, events);
  const Trajectory bwd = integrate_flow(rhs, y0, t0, t0 - span, opt, events);
  rep.forward = fwd.termination;
  rep.forward_boundary = fwd.boundary;
  rep.backward = bwd.termination;
  rep.backward_boundary = bwd.boundary;
  rep.t_hi = fwd.ode.t_back();
  rep.t_lo = bwd.ode.t_back();

  const auto scan = [&](const Trajectory& tr, bool skip_anchor, double& leg_drift) {
    const auto& ts = tr.ode.times();
    const auto& ys = tr.ode.states();
    for (std::size_t i = skip_anchor ? 1 : 0; i < ts.size(); ++i) {
      for (int s = 0; s < compare_entries; ++s) {
        const double want = target(s, ts[i]);
        const double dev = std::abs(ys[i][s] - want) / std::max(1.0, std::abs(want));
        rep.max_deviation = std::max(rep.max_deviation, dev);
      }
      leg_drift = std::max(leg_drift, drift(ys[i]));
      ++rep.nodes;
    }
  };
  scan(fwd, false, rep.forward_drift);
  scan(bwd, true, rep.backward_drift);
  rep.max_constraint_drift = std::max(rep.forward_drift, rep.backward_drift);
  return rep;
}

}  // namespace heis4
