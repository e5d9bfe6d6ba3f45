#include "heis4/solutions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "heis4/cubic.hpp"
#include "heis4/curvature.hpp"
#include "heis4/quadrature.hpp"

namespace heis4 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_interval(double lo, double hi) {
  std::ostringstream os;
  os << "(" << lo << ", " << hi << ")";
  return os.str();
}

}  // namespace

// ---- family table -------------------------------------------------------

const char* family_name(Family family) {
  switch (family) {
    case Family::StationaryTimelike: return "stationary-timelike";
    case Family::StationarySpacelike: return "stationary-spacelike";
    case Family::NegativeTimelike: return "negative-timelike";
    case Family::PositiveTimelike: return "positive-timelike";
    case Family::NegativeSpacelike: return "negative-spacelike";
    case Family::PositiveSpacelike: return "positive-spacelike";
    case Family::LightlikePositive: return "lightlike-positive";
    case Family::LightlikeLorentzian: return "lightlike-lorentzian";
    case Family::HyperKahlerTimelike: return "hyperkahler-timelike";
    case Family::HyperKahlerSpacelike: return "hyperkahler-spacelike";
    case Family::HyperKahlerLightlike: return "hyperkahler-lightlike";
  }
  return "unknown";
}

bool family_from_name(std::string_view name, Family* out) {
  for (Family f : all_families()) {
    if (name == family_name(f)) {
      *out = f;
      return true;
    }
  }
  return false;
}

std::vector<Family> all_families() {
  return {Family::StationaryTimelike,   Family::StationarySpacelike,
          Family::NegativeTimelike,     Family::PositiveTimelike,
          Family::NegativeSpacelike,    Family::PositiveSpacelike,
          Family::LightlikePositive,    Family::LightlikeLorentzian,
          Family::HyperKahlerTimelike,  Family::HyperKahlerSpacelike,
          Family::HyperKahlerLightlike};
}

FamilyTraits family_traits(Family family) {
  FamilyTraits t;
  switch (family) {
    case Family::StationaryTimelike:
      t = {CenterLabeling::TimelikeOrRiemannian, false, false, true, +1, 0,
           "homothety-stationary flow, center timelike or Riemannian slice; lambda = -6 eps k^2"};
      break;
    case Family::StationarySpacelike:
      t = {CenterLabeling::Spacelike, false, false, false, -1, 0,
           "homothety-stationary flow, center spacelike; lambda = 6 k^2"};
      break;
    case Family::NegativeTimelike:
      t = {CenterLabeling::TimelikeOrRiemannian, true, true, true, +1, -1,
           "root-profile family, center timelike or Riemannian slice, eps*lambda < 0"};
      break;
    case Family::PositiveTimelike:
      t = {CenterLabeling::TimelikeOrRiemannian, true, false, true, +1, +1,
           "root-profile family, center timelike or Riemannian slice, eps*lambda > 0"};
      break;
    case Family::NegativeSpacelike:
      t = {CenterLabeling::Spacelike, true, false, false, -1, -1,
           "root-profile family, center spacelike, lambda < 0"};
      break;
    case Family::PositiveSpacelike:
      t = {CenterLabeling::Spacelike, true, true, false, -1, +1,
           "root-profile family, center spacelike, lambda > 0"};
      break;
    case Family::LightlikePositive:
      t = {CenterLabeling::Lightlike, true, false, false, -1, +1,
           "exponential lightlike-center flow on a neutral slice, lambda > 0"};
      break;
    case Family::LightlikeLorentzian:
      t = {CenterLabeling::Lightlike, true, false, false, +1, -1,
           "exponential lightlike-center flow on a Lorentzian slice, lambda < 0"};
      break;
    case Family::HyperKahlerTimelike:
      t = {CenterLabeling::TimelikeOrRiemannian, false, false, true, +1, 0,
           "Ricci-flat cube-root profile, center timelike or Riemannian slice"};
      break;
    case Family::HyperKahlerSpacelike:
      t = {CenterLabeling::Spacelike, false, false, false, -1, 0,
           "Ricci-flat cube-root profile, center spacelike"};
      break;
    case Family::HyperKahlerLightlike:
      t = {CenterLabeling::Lightlike, false, false, false, -1, 0,
           "flat lightlike-center shear flow"};
      break;
  }
  return t;
}

// ---- quasi-Kahler slope field ---------------------------------------------

double qk_timelike_slope(double a, double b, double k, double epslambda, int l) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("slope field needs a > 0 and b > 0");
  if (!(k > 0.0)) throw DomainError("slope field needs k > 0");
  if (epslambda == 0.0) throw DomainError("slope field needs eps*lambda != 0");
  double theta = 0.0;
  if (epslambda < 0.0) {
    switch (l) {
      case 1: theta = 2.0 * M_PI / 3.0; break;
      case 2: theta = 4.0 * M_PI / 3.0; break;
      case 3: theta = 0.0; break;
      default: throw InvalidBranchError("branch label must be 1, 2 or 3");
    }
  } else {
    if (l != 1) throw InvalidBranchError("only branch 1 is real when eps*lambda > 0");
    theta = 0.0;
  }
  const double a2 = a * a;
  const double a3 = a2 * a;
  const double a6 = a3 * a3;
  const double a8 = a6 * a2;
  const double a16 = a8 * a8;
  const double b2 = b * b;
  const double b3 = b2 * b;
  const double b4 = b2 * b2;
  const double b5 = b4 * b;
  const double b6 = b3 * b3;
  const std::complex<double> inner =
      epslambda * epslambda * a16 * b6 * (epslambda * a2 + 81.0 * k * k * b4);
  const std::complex<double> core = 9.0 * k * epslambda * a8 * b5 + std::sqrt(inner);
  const std::complex<double> dcbrt = principal_cbrt(core);
  if (std::abs(dcbrt) == 0.0) throw InvalidBranchError("degenerate slope resolvent");
  const std::complex<double> phase = std::polar(1.0, theta);
  const std::complex<double> root =
      (3.0 * k * a2 * b3 - epslambda * a6 * b2 / (phase * dcbrt) + phase * dcbrt) / (3.0 * a3);
  if (std::abs(root.imag()) > 1e-10 * std::max(1.0, std::abs(root.real())))
    throw InvalidBranchError("selected slope root is not real at this state");
  return root.real();
}

QkRates qk_timelike_rhs(double a, double b, double k, double epslambda, int l) {
  QkRates r;
  r.b_rate = qk_timelike_slope(a, b, k, epslambda, l);
  const double b3 = b * b * b;
  r.beta = k * b3 - a * r.b_rate;
  const double den = b * (2.0 * k * b3 + r.beta);
  if (std::abs(den) < 1e-14 * std::max(1.0, k * b3 * b))
    throw SingularSlopeError("center-rate denominator vanished");
  r.a_rate = -(r.beta * r.beta + k * b3 * r.beta + 2.0 * k * k * b3 * b3) / den;
  return r;
}

QkRates qk_spacelike_rhs(double a, double b, double k, double lambda, int l) {
  QkRates mirrored = qk_timelike_rhs(a, b, k, -lambda, l);
  QkRates r;
  r.a_rate = -mirrored.a_rate;
  r.b_rate = -mirrored.b_rate;
  r.beta = k * b * b * b - a * r.b_rate;
  return r;
}

// ---- root census -----------------------------------------------------------

double gamma_of_rho0(double rho0, double epslambda) {
  return -0.5 * rho0 * (1.0 + epslambda * rho0 / 3.0);
}

std::array<RhoRoot, 3> cubic_rho_roots(double k, double epslambda) {
  if (!(k > 0.0)) throw DomainError("root census needs k > 0");
  if (epslambda == 0.0) throw DomainError("root census needs eps*lambda != 0");
  const double p = 3.0 / (4.0 * epslambda * k * k);
  const double q = -9.0 / (4.0 * k * k * epslambda * epslambda);
  const auto raw = depressed_cubic_roots(p, q);
  // Cardano ordering (w^m factors) -> branch labels: l=1 <- m=0, l=2 <- m=2,
  // l=3 <- m=1.
  const int cardano_of_label[3] = {0, 2, 1};

  std::array<RhoRoot, 3> roots;
  for (int l = 1; l <= 3; ++l) {
    RhoRoot& r = roots[l - 1];
    r.label = l;
    r.value = raw[cardano_of_label[l - 1]];
    const double scale = std::max(1.0, std::abs(r.value));
    r.real = std::abs(r.value.imag()) <= 1e-9 * scale;
    r.rho0 = r.value.real();
    r.gamma = gamma_of_rho0(r.rho0, epslambda);
    const std::complex<double> res = r.value * r.value * r.value + p * r.value + q;
    r.residual = std::abs(res);
    if (epslambda < 0.0) {
      r.sign = (l == 1) ? +1 : -1;
      r.valid = r.real && r.sign * r.rho0 > 0.0 && r.rho0 + r.gamma > 0.0 &&
                r.rho0 + 2.0 * r.gamma > 0.0;
    } else {
      r.sign = +1;
      r.valid = r.real && r.rho0 > 0.0 && r.rho0 + r.gamma > 0.0 && r.rho0 + 2.0 * r.gamma < 0.0;
    }
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      if (!roots[i].valid || !roots[j].valid) continue;
      const double scale = std::max({1.0, std::abs(roots[i].rho0), std::abs(roots[j].rho0)});
      if (std::abs(roots[i].rho0 - roots[j].rho0) <= 1e-9 * scale) {
        roots[i].coincident = true;
        roots[j].coincident = true;
      }
    }
  return roots;
}

// ---- root profile ------------------------------------------------------------

namespace {

enum class BoundKind { Unbounded, SqrtEnd };

struct ChartBound {
  double rho;
  BoundKind kind;
};

}  // namespace

OneLoopProfile one_loop_profile(double k, double epslambda_eff, int l) {
  const auto census = cubic_rho_roots(k, epslambda_eff);
  if (l < 1 || l > 3) throw InvalidBranchError("branch label must be 1, 2 or 3");
  const RhoRoot& root = census[l - 1];
  if (!root.real)
    throw InvalidBranchError("branch root is not real at this eps*lambda");
  if (!root.valid)
    throw InvalidBranchError("branch root does not generate a metric at this eps*lambda");

  OneLoopProfile pr;
  pr.k = k;
  pr.epslambda = epslambda_eff;
  pr.positive_type = epslambda_eff > 0.0;
  pr.l = l;
  pr.s = root.sign;
  pr.d = pr.positive_type ? +1 : -1;
  pr.rho0 = root.rho0;
  pr.gamma = root.gamma;
  if (std::abs(pr.gamma) <= 1e-12 * std::max(1.0, std::abs(pr.rho0))) pr.gamma = 0.0;

  ChartBound lo{}, hi{};
  if (!pr.positive_type) {
    if (l == 1) {
      if (pr.gamma < 0.0) {
        lo = {-2.0 * pr.gamma, BoundKind::SqrtEnd};
      } else {
        lo = {0.0, BoundKind::Unbounded};
      }
      hi = {kInf, BoundKind::Unbounded};
    } else {
      lo = {-pr.gamma, BoundKind::SqrtEnd};
      hi = {0.0, BoundKind::Unbounded};
    }
  } else {
    lo = {-pr.gamma, BoundKind::SqrtEnd};
    hi = {-2.0 * pr.gamma, BoundKind::SqrtEnd};
  }
  pr.rho_lo = lo.rho;
  pr.rho_hi = hi.rho;

  auto inv_rate = [&pr](double r) { return 1.0 / profile_rate<double>(pr, r); };
  if (hi.kind == BoundKind::Unbounded) {
    pr.sigma_hi = kInf;
  } else {
    QuadResult qr = integrate_sqrt_endpoints(inv_rate, pr.rho0, hi.rho, false, true, 1e-13, 1e-15);
    pr.sigma_hi = qr.value;
  }
  if (lo.kind == BoundKind::Unbounded) {
    pr.sigma_lo = -kInf;
  } else {
    QuadResult qr = integrate_sqrt_endpoints(inv_rate, lo.rho, pr.rho0, true, false, 1e-13, 1e-15);
    pr.sigma_lo = -qr.value;
  }
  return pr;
}

RhoPath::RhoPath(const OneLoopProfile& profile) : profile_(profile) {
  cache_.emplace_back(0.0, profile_.rho0);
}

double RhoPath::sigma_of_rho(double rho) const {
  if (!(rho > profile_.rho_lo && rho < profile_.rho_hi))
    throw DomainError("rho outside the chart interval " +
                      format_interval(profile_.rho_lo, profile_.rho_hi));
  // Integrate 1/rate from the nearest cached flow point.
  auto it = std::lower_bound(cache_.begin(), cache_.end(), rho,
                             [](const std::pair<double, double>& e, double v) { return e.second < v; });
  std::pair<double, double> anchor = cache_.front();
  if (it == cache_.end()) {
    anchor = cache_.back();
  } else if (it == cache_.begin()) {
    anchor = cache_.front();
  } else {
    const auto& above = *it;
    const auto& below = *(it - 1);
    anchor = (std::abs(above.second - rho) < std::abs(below.second - rho)) ? above : below;
  }
  const OneLoopProfile& pr = profile_;
  QuadResult qr = integrate_adaptive(
      [&pr](double r) { return 1.0 / profile_rate<double>(pr, r); }, anchor.second, rho, 1e-13,
      1e-15);
  return anchor.first + qr.value;
}

double RhoPath::rho_of_sigma(double sigma) const {
  if (sigma == 0.0) return profile_.rho0;
  if (!(sigma > profile_.sigma_lo && sigma < profile_.sigma_hi))
    throw DomainError("flow time outside " +
                      format_interval(profile_.sigma_lo, profile_.sigma_hi));

  // Bracket from cache, expanding toward the relevant chart bound.
  auto advance = [](double cur, double bound) {
    if (std::isinf(bound)) return 2.0 * std::abs(cur) + 1.0;
    if (bound == 0.0) return 0.5 * cur;
    return 0.5 * (cur + bound);
  };
  double lo_rho, lo_sig, hi_rho, hi_sig;
  {
    auto it = std::lower_bound(
        cache_.begin(), cache_.end(), sigma,
        [](const std::pair<double, double>& e, double v) { return e.first < v; });
    if (it != cache_.end() && it != cache_.begin()) {
      hi_rho = it->second;
      hi_sig = it->first;
      lo_rho = (it - 1)->second;
      lo_sig = (it - 1)->first;
    } else if (it == cache_.begin()) {
      hi_rho = it->second;
      hi_sig = it->first;
      lo_rho = hi_rho;
      lo_sig = hi_sig;
      for (int iter = 0;; ++iter) {
        if (iter > 400) throw DomainError("flow inversion failed to bracket");
        lo_rho = advance(lo_rho, profile_.rho_lo);
        lo_sig = sigma_of_rho(lo_rho);
        if (lo_sig <= sigma) break;
      }
    } else {
      lo_rho = (it - 1)->second;
      lo_sig = (it - 1)->first;
      hi_rho = lo_rho;
      hi_sig = lo_sig;
      for (int iter = 0;; ++iter) {
        if (iter > 400) throw DomainError("flow inversion failed to bracket");
        hi_rho = advance(hi_rho, profile_.rho_hi);
        hi_sig = sigma_of_rho(hi_rho);
        if (hi_sig >= sigma) break;
      }
    }
  }

  // Safeguarded Newton on F(rho) = sigma(rho) - sigma, F' = 1/rate.
  double x = 0.5 * (lo_rho + hi_rho);
  double fx = sigma_of_rho(x) - sigma;
  const double ftol = 1e-13 * std::max(1.0, std::abs(sigma));
  for (int iter = 0; iter < 200 && std::abs(fx) > ftol; ++iter) {
    if (fx > 0.0) {
      hi_rho = x;
    } else {
      lo_rho = x;
    }
    double next = x - fx * profile_rate<double>(profile_, x);
    if (!(next > lo_rho && next < hi_rho)) next = 0.5 * (lo_rho + hi_rho);
    if (next == x) break;
    x = next;
    fx = sigma_of_rho(x) - sigma;
  }
  if (cache_.size() < 4096) {
    const double key = sigma + fx;  // actual flow time of the converged rho
    auto it = std::lower_bound(
        cache_.begin(), cache_.end(), key,
        [](const std::pair<double, double>& e, double v) { return e.first < v; });
    cache_.insert(it, {key, x});
  }
  return x;
}

Taylor4 RhoPath::rho_series(double sigma) const {
  const double val = rho_of_sigma(sigma);
  Taylor4 s = Taylor4::constant(val);
  for (int iter = 0; iter < 3; ++iter)
    s = Taylor4::constant(val) + antiderivative(profile_rate<Taylor4>(profile_, s));
  return s;
}

// ---- lightlike-center evolution system ----------------------------------------

std::array<double, 7> lightlike_rhs(const std::array<double, 7>& y, double mu) {
  const double a = y[0], b = y[1], f = y[2], p = y[3];
  const double bp = y[4], fp = y[5], pp = y[6];
  if (b == 0.0 || a == 0.0) throw DomainError("lightlike state needs a != 0 and b != 0");
  if (bp == 0.0) throw SingularSlopeError("lightlike center rate undefined at b' = 0");
  const double ap = a * (-mu * b / bp - bp / (4.0 * b));
  const double bpp = 1.75 * bp * bp / b + mu * b;
  const double fpp = a * ap * (b * fp - f * bp) / b +
                     (p * bp - b * pp) * (p * bp - b * pp) / (2.0 * b * b) +
                     a * a * (-3.0 * f * bp * bp + 3.0 * b * bp * fp + b * f * bpp) / (b * b);
  const double ppp = -2.0 * p * bp * bp / (b * b) + 3.0 * ap * pp / a + 2.0 * bp * pp / b +
                     p * (-3.0 * ap * bp + a * bpp) / (a * b);
  return {ap, bp, fp, pp, bpp, fpp, ppp};
}

double lightlike_residual(const FrameEvolution& ev, double lambda, double t) {
  const double mu = ev.eps * lambda;
  const Taylor4 A = ev.a.series(t);
  const Taylor4 B = ev.b.series(t);
  const Taylor4 F = ev.f.series(t);
  const Taylor4 P = ev.p.series(t);
  const double a = A.c[0], ap = A.deriv(1), app = A.deriv(2);
  const double b = B.c[0], bp = B.deriv(1), bpp = B.deriv(2);
  const double f = F.c[0], fp = F.deriv(1), fpp = F.deriv(2);
  const double p = P.c[0], pp0 = P.deriv(1), ppp = P.deriv(2);
  const double r_constraint = ap * bp + mu * a * b + a * bp * bp / (4.0 * b);
  const double r_b = bpp - 1.75 * bp * bp / b - mu * b;
  const double r_a = app - mu * a - 2.0 * ap * ap / a - ap * bp / b;
  const double r_f = fpp - (a * ap * (b * fp - f * bp) / b +
                            (p * bp - b * pp0) * (p * bp - b * pp0) / (2.0 * b * b) +
                            a * a * (-3.0 * f * bp * bp + 3.0 * b * bp * fp + b * f * bpp) /
                                (b * b));
  const double r_p = ppp - (-2.0 * p * bp * bp / (b * b) + 3.0 * ap * pp0 / a +
                            2.0 * bp * pp0 / b + p * (-3.0 * ap * bp + a * bpp) / (a * b));
  return std::max({std::abs(r_constraint), std::abs(r_b), std::abs(r_a), std::abs(r_f),
                   std::abs(r_p)});
}

// ---- assembled solutions --------------------------------------------------------

namespace {

TimeFunction exp_entry(double rate, double t0) {
  return TimeFunction([rate, t0](const Taylor4& t) { return exp((t - t0) * rate); });
}

TimeFunction cube_root_entry(double slope, double alpha, double t0) {
  return TimeFunction(
      [slope, alpha, t0](const Taylor4& t) { return pow(1.0 + (t - t0) * slope, alpha); });
}

TimeFunction linear_entry(double c0, double c1, double t0) {
  return TimeFunction([c0, c1, t0](const Taylor4& t) { return (t - t0) * c1 + c0; });
}

TimeFunction flow_entry(std::shared_ptr<const RhoPath> path, double t0, bool center) {
  const int d = path->profile().d;
  return TimeFunction([path, t0, d, center](const Taylor4& t) {
    const double sigma = d * (t.c[0] - t0);
    Taylor4 rho = path->rho_series(sigma);
    if (d < 0) {
      rho.c[1] = -rho.c[1];
      rho.c[3] = -rho.c[3];
    }
    return center ? profile_A<Taylor4>(path->profile(), rho)
                  : profile_B<Taylor4>(path->profile(), rho);
  });
}

Metric timelike_rho_metric(const OneLoopProfile& pr, int eps) {
  const double k = pr.k, g = pr.gamma, el = pr.epslambda;
  const double lo = pr.rho_lo, hi = pr.rho_hi;
  return Metric::analytic([k, g, el, eps, lo, hi](const auto& pt) {
    using S = std::decay_t<decltype(pt[0])>;
    const double rv = value_of(pt[0]);
    if (!(rv > lo && rv < hi))
      throw DomainError("rho outside the chart interval " + format_interval(lo, hi));
    const S rho = pt[0];
    const S ratio = (rho + g) / (rho + 2.0 * g);
    const S pref = (-3.0 / (2.0 * el)) / (rho * rho * ratio);
    const S c_center = pref * (static_cast<double>(eps) / (k * k)) * ratio * ratio;
    const S c_trans = pref * (2.0 * (rho + g));
    const auto rows = labeled_coframe(k, CenterLabeling::TimelikeOrRiemannian, pt);
    Mat4<S> out = mat4_zero<S>();
    out[0][0] = pref * static_cast<double>(eps);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        out[mu][nu] = out[mu][nu] + c_center * (rows[0][mu] * rows[0][nu]) +
                      c_trans * (rows[1][mu] * rows[1][nu] + rows[2][mu] * rows[2][nu]);
    return out;
  });
}

Metric spacelike_rho_metric(const OneLoopProfile& pr, double lambda) {
  const double k = pr.k, g = pr.gamma;
  const double lo = pr.rho_lo, hi = pr.rho_hi;
  return Metric::analytic([k, g, lambda, lo, hi](const auto& pt) {
    using S = std::decay_t<decltype(pt[0])>;
    const double rv = value_of(pt[0]);
    if (!(rv > lo && rv < hi))
      throw DomainError("rho outside the chart interval " + format_interval(lo, hi));
    const S rho = pt[0];
    const S ratio = (rho + g) / (rho + 2.0 * g);
    const S pref = (3.0 / (2.0 * lambda)) / (rho * rho * ratio);
    const S c_first = pref * (-2.0 * (rho + g));
    const S c_second = pref * (2.0 * (rho + g));
    const S c_center = pref * (ratio / k) * (ratio / k);
    const auto rows = labeled_coframe(k, CenterLabeling::Spacelike, pt);
    Mat4<S> out = mat4_zero<S>();
    out[0][0] = -pref;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        out[mu][nu] = out[mu][nu] + c_first * (rows[0][mu] * rows[0][nu]) +
                      c_second * (rows[1][mu] * rows[1][nu]) +
                      c_center * (rows[2][mu] * rows[2][nu]);
    return out;
  });
}

void attach_flow(Solution& sol, const OneLoopProfile& pr) {
  auto path = std::make_shared<RhoPath>(pr);
  sol.path = path;
  const double t0 = sol.spec.t0;
  sol.evolution.a = flow_entry(path, t0, true);
  sol.evolution.b = flow_entry(path, t0, false);
  sol.evolution.c = flow_entry(path, t0, false);
  if (pr.d > 0) {
    sol.evolution.t_min = std::isinf(pr.sigma_lo) ? -kInf : t0 + pr.sigma_lo;
    sol.evolution.t_max = std::isinf(pr.sigma_hi) ? kInf : t0 + pr.sigma_hi;
  } else {
    sol.evolution.t_min = std::isinf(pr.sigma_hi) ? -kInf : t0 - pr.sigma_hi;
    sol.evolution.t_max = std::isinf(pr.sigma_lo) ? kInf : t0 - pr.sigma_lo;
  }
  double sig_neg = std::isinf(pr.sigma_lo) ? -1.2 : 0.85 * pr.sigma_lo;
  double sig_pos = std::isinf(pr.sigma_hi) ? 1.2 : 0.85 * pr.sigma_hi;
  sig_neg = std::max(sig_neg, -1.5);
  sig_pos = std::min(sig_pos, 1.5);
  sol.rho_sample_lo = path->rho_of_sigma(sig_neg);
  sol.rho_sample_hi = path->rho_of_sigma(sig_pos);
  if (pr.d > 0) {
    sol.t_sample_lo = t0 + sig_neg;
    sol.t_sample_hi = t0 + sig_pos;
  } else {
    sol.t_sample_lo = t0 - sig_pos;
    sol.t_sample_hi = t0 - sig_neg;
  }
  sol.flow_direction = pr.d;
  sol.has_rho_chart = true;
}

// Largest Einstein residual over both charts at the flow time sigma; used to
// trim sampling windows away from chart ends where the coefficients blow up
// and curvature evaluation loses digits.
double window_residual(const Solution& sol, double sig) {
  const double rho = sol.path->rho_of_sigma(sig);
  const Vec4<double> prho{rho, 0.2, -0.3, 0.15};
  double r = einstein_residual(curvature_at(sol.rho_metric.field(), prho), sol.lambda);
  const double t = sol.spec.t0 + sol.flow_direction * sig;
  const Vec4<double> pt{t, 0.2, -0.3, 0.15};
  r = std::max(r, einstein_residual(curvature_at(sol.metric.field(), pt), sol.lambda));
  return r;
}

// Shrinks each sampling endpoint toward the anchor until the residual check
// clears 1e-10 there, so downstream verification sweeps stay well conditioned.
void refine_sampling_window(Solution& sol) {
  if (!sol.has_rho_chart) return;
  const double t0 = sol.spec.t0;
  const int d = sol.flow_direction;
  double sig_neg = d > 0 ? sol.t_sample_lo - t0 : t0 - sol.t_sample_hi;
  double sig_pos = d > 0 ? sol.t_sample_hi - t0 : t0 - sol.t_sample_lo;
  const double tol = 1e-10;
  for (int i = 0; i < 60 && window_residual(sol, sig_neg) > tol; ++i) sig_neg *= 0.85;
  for (int i = 0; i < 60 && window_residual(sol, sig_pos) > tol; ++i) sig_pos *= 0.85;
  sol.rho_sample_lo = sol.path->rho_of_sigma(sig_neg);
  sol.rho_sample_hi = sol.path->rho_of_sigma(sig_pos);
  if (d > 0) {
    sol.t_sample_lo = t0 + sig_neg;
    sol.t_sample_hi = t0 + sig_pos;
  } else {
    sol.t_sample_lo = t0 - sig_pos;
    sol.t_sample_hi = t0 - sig_neg;
  }
}

}  // namespace

Solution make_solution(const SolutionSpec& spec_in) {
  SolutionSpec spec = spec_in;
  if (!(spec.k > 0.0)) throw DomainError("k must be positive");
  if (spec.eps != 1 && spec.eps != -1) throw DomainError("eps must be +1 or -1");
  const FamilyTraits traits = family_traits(spec.family);
  if (!traits.eps_free) spec.eps = traits.forced_eps;
  if (!traits.has_branch) {
    spec.branch = 1;
  } else if (spec.branch < 1 || spec.branch > 3) {
    throw InvalidBranchError("branch label must be 1, 2 or 3");
  }

  Solution sol;
  sol.spec = spec;
  FrameEvolution& ev = sol.evolution;
  ev.labeling = traits.labeling;
  ev.eps = spec.eps;
  ev.k = spec.k;
  ev.t0 = spec.t0;
  const double k = spec.k;
  const double t0 = spec.t0;

  switch (spec.family) {
    case Family::StationaryTimelike: {
      sol.lambda = -6.0 * k * k * spec.eps;
      ev.a = exp_entry(-2.0 * k, t0);
      ev.b = exp_entry(-k, t0);
      ev.c = exp_entry(-k, t0);
      sol.t_sample_lo = t0 - 1.5;
      sol.t_sample_hi = t0 + 1.5;
      break;
    }
    case Family::StationarySpacelike: {
      sol.lambda = 6.0 * k * k;
      ev.a = exp_entry(2.0 * k, t0);
      ev.b = exp_entry(k, t0);
      ev.c = exp_entry(k, t0);
      sol.t_sample_lo = t0 - 1.5;
      sol.t_sample_hi = t0 + 1.5;
      break;
    }
    case Family::NegativeTimelike: {
      const double el = spec.eps * spec.lambda;
      if (!(el < 0.0)) throw DomainError("negative-timelike requires eps*lambda < 0");
      sol.lambda = spec.lambda;
      OneLoopProfile pr = one_loop_profile(k, el, spec.branch);
      attach_flow(sol, pr);
      sol.rho_metric = timelike_rho_metric(pr, spec.eps);
      break;
    }
    case Family::PositiveTimelike: {
      const double el = spec.eps * spec.lambda;
      if (!(el > 0.0)) throw DomainError("positive-timelike requires eps*lambda > 0");
      sol.lambda = spec.lambda;
      OneLoopProfile pr = one_loop_profile(k, el, 1);
      attach_flow(sol, pr);
      sol.rho_metric = timelike_rho_metric(pr, spec.eps);
      break;
    }
    case Family::NegativeSpacelike: {
      if (!(spec.lambda < 0.0)) throw DomainError("negative-spacelike requires lambda < 0");
      sol.lambda = spec.lambda;
      OneLoopProfile pr = one_loop_profile(k, -spec.lambda, 1);
      pr.d = -pr.d;
      attach_flow(sol, pr);
      sol.rho_metric = spacelike_rho_metric(pr, spec.lambda);
      break;
    }
    case Family::PositiveSpacelike: {
      if (!(spec.lambda > 0.0)) throw DomainError("positive-spacelike requires lambda > 0");
      sol.lambda = spec.lambda;
      OneLoopProfile pr = one_loop_profile(k, -spec.lambda, spec.branch);
      pr.d = -pr.d;
      attach_flow(sol, pr);
      sol.rho_metric = spacelike_rho_metric(pr, spec.lambda);
      break;
    }
    case Family::LightlikePositive: {
      if (!(spec.lambda > 0.0)) throw DomainError("lightlike-positive requires lambda > 0");
      sol.lambda = spec.lambda;
      const double alpha = std::sqrt(spec.lambda / 3.0);
      ev.b = exp_entry(2.0 * alpha, t0);
      ev.a = exp_entry(alpha, t0);
      sol.t_sample_lo = t0 - 1.5;
      sol.t_sample_hi = t0 + 1.5;
      break;
    }
    case Family::LightlikeLorentzian: {
      if (!(spec.lambda < 0.0)) throw DomainError("lightlike-lorentzian requires lambda < 0");
      sol.lambda = spec.lambda;
      const double alpha = std::sqrt(-spec.lambda / 3.0);
      ev.b = exp_entry(2.0 * alpha, t0);
      ev.a = exp_entry(alpha, t0);
      sol.t_sample_lo = t0 - 1.5;
      sol.t_sample_hi = t0 + 1.5;
      break;
    }
    case Family::HyperKahlerTimelike: {
      sol.lambda = 0.0;
      ev.a = cube_root_entry(3.0 * k, 1.0 / 3.0, t0);
      ev.b = cube_root_entry(3.0 * k, -1.0 / 3.0, t0);
      ev.c = cube_root_entry(3.0 * k, -1.0 / 3.0, t0);
      ev.t_min = t0 - 1.0 / (3.0 * k);
      sol.t_sample_lo = t0 - 0.8 / (3.0 * k);
      sol.t_sample_hi = t0 + 1.5;
      break;
    }
    case Family::HyperKahlerSpacelike: {
      sol.lambda = 0.0;
      ev.a = cube_root_entry(-3.0 * k, 1.0 / 3.0, t0);
      ev.b = cube_root_entry(-3.0 * k, -1.0 / 3.0, t0);
      ev.c = cube_root_entry(-3.0 * k, -1.0 / 3.0, t0);
      ev.t_max = t0 + 1.0 / (3.0 * k);
      sol.t_sample_lo = t0 - 1.5;
      sol.t_sample_hi = t0 + 0.8 / (3.0 * k);
      break;
    }
    case Family::HyperKahlerLightlike: {
      sol.lambda = 0.0;
      ev.f = linear_entry(0.0, -2.0 * k, t0);
      sol.t_sample_lo = t0 - 1.5;
      sol.t_sample_hi = t0 + 1.5;
      break;
    }
  }
  sol.spec.lambda = sol.lambda;
  sol.metric = metric_from_evolution(ev);
  refine_sampling_window(sol);
  return sol;
}

}  // namespace heis4
