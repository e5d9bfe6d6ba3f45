#include "heis4/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "heis4/curvature.hpp"
#include "heis4/quadrature.hpp"

namespace heis4 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

Ten3<double> christoffel_at(const MetricField& gf, const Vec4<double>& p) {
  const Mat4<J1> gj = gf.components(seed_point(p));
  Mat4<double> g = mat4_zero<double>();
  Ten3<double> dg{};  // dg[c][a][b] = d_c g_ab
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      g[a][b] = gj[a][b].v;
      for (int c = 0; c < 4; ++c) dg[c][a][b] = gj[a][b].d[c];
    }
  }
  const Mat4<double> ginv = mat4_inverse(g);
  Ten3<double> gamma{};
  for (int l = 0; l < 4; ++l) {
    for (int m = 0; m < 4; ++m) {
      for (int n = m; n < 4; ++n) {
        double s = 0.0;
        for (int r = 0; r < 4; ++r) s += ginv[l][r] * (dg[m][r][n] + dg[n][r][m] - dg[r][m][n]);
        gamma[l][m][n] = 0.5 * s;
        gamma[l][n][m] = gamma[l][m][n];
      }
    }
  }
  return gamma;
}

double metric_speed(const MetricField& gf, const GeodesicState& s) {
  const Mat4<double> g = gf.components(s.point);
  double q = 0.0;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) q += g[m][n] * s.velocity[m] * s.velocity[n];
  }
  return q;
}

namespace {

// g(v, v) together with the sum of the absolute contraction terms, which sets
// the cancellation scale the conserved value must be judged against.
std::pair<double, double> speed_and_scale(const MetricField& gf, const GeodesicState& s) {
  const Mat4<double> g = gf.components(s.point);
  double q = 0.0;
  double scale = 0.0;
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < 4; ++n) {
      const double term = g[m][n] * s.velocity[m] * s.velocity[n];
      q += term;
      scale += std::abs(term);
    }
  }
  return {q, scale};
}

}  // namespace

std::array<double, 8> geodesic_rhs(const MetricField& gf, const GeodesicState& s) {
  const Ten3<double> gamma = christoffel_at(gf, s.point);
  std::array<double, 8> out{};
  for (int i = 0; i < 4; ++i) out[i] = s.velocity[i];
  for (int l = 0; l < 4; ++l) {
    double acc = 0.0;
    for (int m = 0; m < 4; ++m) {
      for (int n = 0; n < 4; ++n) acc += gamma[l][m][n] * s.velocity[m] * s.velocity[n];
    }
    out[4 + l] = -acc;
  }
  return out;
}

GeodesicLeg integrate_geodesic(const MetricField& gf, const GeodesicState& start, double span,
                               const std::vector<OdeEventSpec>& events,
                               const OdeOptions& options) {
  // Out-of-domain trial stages surface as NaN, which the stepper rejects and
  // retries smaller, so walls shrink the step instead of aborting the run.
  const OdeRhs rhs = [&gf](double, const std::vector<double>& y, std::vector<double>& dy) {
    const GeodesicState s{{y[0], y[1], y[2], y[3]}, {y[4], y[5], y[6], y[7]}};
    try {
      const auto d = geodesic_rhs(gf, s);
      std::copy(d.begin(), d.end(), dy.begin());
    } catch (const DomainError&) {
      std::fill(dy.begin(), dy.end(), kNan);
    } catch (const std::domain_error&) {
      std::fill(dy.begin(), dy.end(), kNan);
    }
  };
  std::vector<double> y0 = {start.point[0],    start.point[1],    start.point[2],
                            start.point[3],    start.velocity[0], start.velocity[1],
                            start.velocity[2], start.velocity[3]};
  GeodesicLeg leg;
  leg.path = integrate(rhs, std::move(y0), 0.0, span, options, events);
  leg.affine_span = std::abs(leg.path.t_back());
  leg.speed_initial = metric_speed(gf, start);
  double worst = 0.0;
  double scale = 1.0;
  for (const auto& y : leg.path.states()) {
    const GeodesicState s{{y[0], y[1], y[2], y[3]}, {y[4], y[5], y[6], y[7]}};
    const auto [q, sc] = speed_and_scale(gf, s);
    worst = std::max(worst, std::abs(q - leg.speed_initial));
    scale = std::max(scale, sc);
  }
  leg.speed_drift = worst / (scale * std::max(1.0, leg.affine_span));
  leg.event_fired = leg.path.stop() == OdeStop::Event && leg.path.event().has_value();
  if (leg.event_fired) leg.boundary = leg.path.event()->name;
  return leg;
}

GeodesicState state_at(const GeodesicLeg& leg, double tau) {
  const std::vector<double> y = leg.path.eval(tau);
  return {{y[0], y[1], y[2], y[3]}, {y[4], y[5], y[6], y[7]}};
}

double normal_length(const SolutionSpec& spec, double from, double to) {
  const Solution sol = make_solution(spec);
  double a = std::min(from, to);
  double b = std::max(from, to);
  if (a == b) return 0.0;
  if (!sol.has_rho_chart) {
    // Unit-speed curve in t: the proper length is the plain t-distance.
    const double lo = sol.evolution.t_min;
    const double hi = sol.evolution.t_max;
    if (a < lo - 1e-9 || b > hi + 1e-9)
      throw DomainError("normal_length: endpoint outside the t-domain closure");
    if (std::isinf(a) || std::isinf(b)) return kInf;
    return b - a;
  }
  const OneLoopProfile& pr = sol.path->profile();
  const double lo = pr.rho_lo;
  const double hi = pr.rho_hi;
  const double tol = 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
  if (a < lo - tol || b > hi + tol)
    throw DomainError("normal_length: endpoint outside the rho chart closure");
  if (std::isinf(a) || std::isinf(b)) return kInf;
  // A wall at rho = 0 has a 1/|rho| tail, which is not integrable.
  if (std::abs(a) < 1e-14 || std::abs(b) < 1e-14) return kInf;
  a = std::max(a, lo);
  b = std::min(b, hi);
  const double g = pr.gamma;
  const double gtol = 1e-12 * std::max(1.0, std::abs(g));
  const bool sing_a = std::abs(a + g) <= gtol;
  const bool sing_b = std::abs(b + g) <= gtol;
  const auto f = [&pr](double rho) { return 1.0 / std::abs(profile_rate(pr, rho)); };
  return integrate_sqrt_endpoints(f, a, b, sing_a, sing_b, 1e-12, 1e-14).value;
}

const char* probe_verdict_name(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::IncompleteEvidence:
      return "IncompleteEvidence";
    case ProbeVerdict::NoFiniteBoundaryFound:
    default:
      return "NoFiniteBoundaryFound";
  }
}

namespace {

struct LegPlan {
  enum class Kind { WallCollar, Budget, Escape };
  Kind kind = Kind::Budget;
  bool conjecture = false;
  std::string target;
  const MetricField* field = nullptr;
  GeodesicState start{};
  double span = 0.0;
  double tail = 0.0;  // proper length between the collar stop and the wall
  std::vector<OdeEventSpec> events{};
};

GeodesicState normal_ray(double t_at, int dir) {
  return {{t_at, 0.2, -0.3, 0.4}, {static_cast<double>(dir), 0.0, 0.0, 0.0}};
}

std::vector<OdeEventSpec> escape_guards() {
  std::vector<OdeEventSpec> ev(2);
  ev[0].name = "velocity blow-up";
  ev[0].value = [](double, const std::vector<double>& y) {
    double m = 0.0;
    for (int i = 4; i < 8; ++i) m = std::max(m, std::abs(y[i]));
    return 1e8 - m;
  };
  ev[0].direction = -1;
  ev[1].name = "chart escape";
  ev[1].value = [](double, const std::vector<double>& y) {
    double m = 0.0;
    for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(y[i]));
    return 1e10 - m;
  };
  ev[1].direction = -1;
  return ev;
}

double log10_ratio(double num, double den) {
  const double n = std::abs(num);
  const double d = std::abs(den);
  if (!std::isfinite(n)) return 308.0;
  if (n == 0.0 && d == 0.0) return 0.0;
  return std::log10(std::max(n, 1e-300)) - std::log10(std::max(d, 1e-300));
}

ProbeLeg execute_leg(const LegPlan& plan, std::vector<double>* trace) {
  const GeodesicLeg leg = integrate_geodesic(*plan.field, plan.start, plan.span, plan.events);
  ProbeLeg out;
  out.target = plan.target;
  out.affine_span = leg.affine_span;
  out.speed_drift = leg.speed_drift;
  out.length = std::sqrt(std::abs(leg.speed_initial)) * leg.affine_span;
  const int n = 9;
  double k_first = kNan, k_last = kNan, det_first = kNan, det_last = kNan;
  for (int i = 0; i < n; ++i) {
    const double tau = leg.path.t_back() * static_cast<double>(i) / (n - 1.0);
    double kk = kNan;
    double dd = kNan;
    try {
      const auto y = leg.path.eval(tau);
      const auto c = curvature_at<double>(*plan.field, {y[0], y[1], y[2], y[3]});
      kk = c.kretschmann;
      dd = c.detg;
    } catch (const DomainError&) {
    } catch (const std::domain_error&) {
    }
    if (trace) trace->push_back(kk);
    if (i == 0) {
      k_first = kk;
      det_first = dd;
    }
    if (std::isfinite(kk) || i == n - 1) k_last = kk;
    if (std::isfinite(dd) || i == n - 1) det_last = dd;
  }
  out.kretschmann_growth = log10_ratio(k_last, k_first);
  out.degeneration = std::abs(log10_ratio(det_last, det_first));
  switch (plan.kind) {
    case LegPlan::Kind::WallCollar:
      out.boundary_reached = leg.path.stop() == OdeStop::ReachedEnd;
      if (out.boundary_reached) out.length += plan.tail;
      break;
    case LegPlan::Kind::Escape:
      out.boundary_reached = leg.event_fired;
      break;
    case LegPlan::Kind::Budget:
      out.boundary_reached = false;
      break;
  }
  return out;
}

bool leg_is_evidence(const LegPlan& plan, const ProbeLeg& leg) {
  if (!leg.boundary_reached || !std::isfinite(leg.length)) return false;
  if (plan.kind == LegPlan::Kind::Escape) return true;
  return leg.kretschmann_growth >= 4.0 || leg.degeneration >= 4.0;
}

}  // namespace

ProbeResult incompleteness_probe(const SolutionSpec& spec_in) {
  const Solution sol = make_solution(spec_in);
  const SolutionSpec& spec = sol.spec;
  const FrameEvolution& ev = sol.evolution;
  const double t0 = spec.t0;
  const MetricField& tf = sol.metric.field();
  constexpr double kBudget = 20.0;

  std::vector<LegPlan> plans;
  std::string note;

  const auto push_budget_rays = [&plans, &tf, t0](double span) {
    for (int dir : {+1, -1}) {
      LegPlan p;
      p.kind = LegPlan::Kind::Budget;
      p.target = dir > 0 ? "forward budget ray" : "backward budget ray";
      p.field = &tf;
      p.start = normal_ray(t0, dir);
      p.span = span;
      plans.push_back(p);
    }
  };
  const auto push_wall_ray = [&plans, &tf, t0](double dist, int dir, double collar,
                                               std::string target) {
    LegPlan p;
    p.kind = LegPlan::Kind::WallCollar;
    p.target = std::move(target);
    p.field = &tf;
    p.start = normal_ray(t0, dir);
    p.span = dist - collar;
    p.tail = collar;
    plans.push_back(p);
  };

  switch (spec.family) {
    case Family::HyperKahlerTimelike:
      push_wall_ray(t0 - ev.t_min, -1, 1e-9, "collapsing wall at t0 - 1/(3k)");
      note = "normal ray meets the degenerate wall at proper length 1/(3k)";
      break;
    case Family::HyperKahlerSpacelike:
      push_wall_ray(ev.t_max - t0, +1, 1e-9, "collapsing wall at t0 + 1/(3k)");
      note = "normal ray meets the degenerate wall at proper length 1/(3k)";
      break;
    case Family::HyperKahlerLightlike:
      push_budget_rays(kBudget);
      note = "flat metric, every geodesic extends";
      break;
    case Family::StationaryTimelike:
    case Family::StationarySpacelike:
      // Every t-translate is isometric up to homothety, so a short window
      // already demonstrates the whole ray; it also keeps the curvature
      // samples inside the well-conditioned scale range.
      push_budget_rays(4.0 / spec.k);
      note = "self-similar flow, normal rays have infinite length both ways";
      break;
    case Family::LightlikePositive: {
      // Distinguished curve that escapes to t -> +inf in finite affine time,
      // launched from its tau = 0 data; the remaining parameter to the escape
      // is 2B, so the collar tail is known in closed form.
      const double lam = sol.lambda;
      const double B = 0.5;
      const double sh = std::sinh(B);
      const double root3 = std::sqrt(3.0);
      LegPlan p;
      p.kind = LegPlan::Kind::WallCollar;
      p.target = "t -> +inf at finite affine parameter";
      p.field = &tf;
      const double t_start = t0 - (root3 / (2.0 * std::sqrt(lam))) *
                                      std::log(4.0 * lam * sh * sh / 3.0);
      const double tdot = -(root3 / (2.0 * std::sqrt(lam))) * (std::cosh(B) / sh);
      const double ydot = 3.0 / (4.0 * lam * sh * sh);
      p.start = {{t_start, 0.0, 0.0, 0.0}, {tdot, 0.0, ydot, 0.0}};
      const double collar_tau = 1e-6;
      p.span = -(2.0 * B - collar_tau);
      p.tail = std::sqrt(3.0 / (4.0 * lam)) * collar_tau;
      plans.push_back(p);
      LegPlan q;
      q.kind = LegPlan::Kind::Budget;
      q.target = "regular direction of the same curve";
      q.field = &tf;
      q.start = p.start;
      q.span = 6.0;
      plans.push_back(q);
      note = "distinguished curve reaches t -> +inf at finite affine parameter";
      break;
    }
    case Family::LightlikeLorentzian: {
      // Timelike launch through the Witt pair; the flow stretches that pair
      // exponentially, so the probe watches for finite-affine escape.
      for (int dir : {+1, -1}) {
        LegPlan p;
        p.kind = LegPlan::Kind::Escape;
        p.target = "Witt-pair escape probe";
        p.field = &tf;
        p.start = {{t0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, -0.5}};
        p.span = dir * kBudget;
        p.events = escape_guards();
        plans.push_back(p);
      }
      note = "timelike probes through the stretching Witt pair";
      break;
    }
    default: {  // root-profile families
      const OneLoopProfile& pr = sol.path->profile();
      const int d = sol.flow_direction;
      bool any_wall = false;
      for (int side = 0; side < 2; ++side) {
        const double sw = side == 0 ? pr.sigma_lo : pr.sigma_hi;
        const double rw = side == 0 ? pr.rho_lo : pr.rho_hi;
        if (!std::isfinite(sw)) continue;
        any_wall = true;
        const double dt = d * sw;
        const double dist = std::abs(dt);
        std::ostringstream os;
        os << "metric wall at rho = " << rw;
        push_wall_ray(dist, dt > 0.0 ? +1 : -1, std::min(1e-7, 0.5 * dist), os.str());
      }
      if (any_wall) {
        note = "normal rays meet the chart walls at finite proper length";
      } else if (pr.gamma > 0.0 && pr.l == 1 && spec.eps == -1) {
        // Conjectured-incomplete branch: probes boosted along the positive
        // transverse slice direction, which the labeling places at x for a
        // timelike center and at y for a spacelike one.
        const MetricField& rf = sol.rho_metric.field();
        const Vec4<double> anchor{pr.rho0, 0.0, 0.0, 0.0};
        const Mat4<double> g0 = rf.components(anchor);
        const bool spacelike =
            family_traits(spec.family).labeling == CenterLabeling::Spacelike;
        const int slot = spacelike ? 2 : 1;
        const double v0 = 1.0 / std::sqrt(std::abs(g0[slot][slot]));
        for (int dir : {+1, -1}) {
          LegPlan p;
          p.kind = LegPlan::Kind::Escape;
          p.conjecture = true;
          p.target = "boosted escape probe";
          p.field = &rf;
          p.start = {{pr.rho0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}};
          p.start.velocity[slot] = v0;
          p.span = dir * kBudget;
          p.events = escape_guards();
          plans.push_back(p);
        }
        note = "boosted probes, numeric support for the conjectured incompleteness";
      } else {
        push_budget_rays(kBudget);
        note = "normal rays have infinite length toward both chart ends; "
               "completeness rests on the literature and is recorded as unfalsified";
      }
      break;
    }
  }

  ProbeResult result;
  std::vector<std::vector<double>> traces(plans.size());
  std::vector<bool> evidence(plans.size(), false);
  for (std::size_t i = 0; i < plans.size(); ++i) {
    ProbeLeg leg = execute_leg(plans[i], &traces[i]);
    evidence[i] = leg_is_evidence(plans[i], leg);
    result.speed_drift = std::max(result.speed_drift, leg.speed_drift);
    result.legs.push_back(std::move(leg));
  }

  std::size_t decisive = plans.size();
  bool all_conjectural = true;
  double span_sum = 0.0;
  double length_sum = 0.0;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (!evidence[i]) continue;
    if (decisive == plans.size()) decisive = i;
    all_conjectural = all_conjectural && plans[i].conjecture;
    span_sum += result.legs[i].affine_span;
    length_sum += result.legs[i].length;
  }
  if (decisive < plans.size()) {
    result.verdict = ProbeVerdict::IncompleteEvidence;
    result.conjectural = all_conjectural;
    result.boundary_reached = true;
    result.affine_span = span_sum;
    result.length = length_sum;
    result.kretschmann_trace = traces[decisive];
    result.note = note + "; finite-length boundary arrival confirmed";
  } else {
    result.verdict = ProbeVerdict::NoFiniteBoundaryFound;
    result.boundary_reached = false;
    for (const auto& leg : result.legs) {
      result.affine_span += leg.affine_span;
      result.length += leg.length;
    }
    if (!plans.empty()) result.kretschmann_trace = traces[0];
    result.note = note + "; no finite-length boundary found within the probe budget";
  }
  return result;
}

}  // namespace heis4
