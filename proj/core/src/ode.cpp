#include "heis4/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heis4 {

namespace {

// Dormand-Prince 5(4) tableau. The last stage row equals the fifth-order
// weights (first-same-as-last), so the end-of-step derivative seeds the next
// step for free.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

struct Stepper {
  const OdeRhs& rhs;
  int n;
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, ytmp, y5, y4;

  explicit Stepper(const OdeRhs& f, int dim)
      : rhs(f), n(dim), k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), ytmp(dim),
        y5(dim), y4(dim) {}

  // k1 must hold rhs(t, y) on entry. On exit y5/y4 hold the two candidate
  // solutions and k7 = rhs(t+h, y5).
  void step(double t, const std::vector<double>& y, double h) {
    for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (int i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (int i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (int i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (int i = 0; i < n; ++i)
      y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, y5, k7);
    for (int i = 0; i < n; ++i)
      y4[i] = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
  }
};

struct Core {
  OdeStop stop = OdeStop::ReachedEnd;
  double t_end = 0.0;
  std::vector<double> y_end;
  long steps = 0;
};

// Integrates without event handling, optionally recording accepted nodes.
Core run_core(const OdeRhs& rhs, std::vector<double> y, double t0, double t1,
              const OdeOptions& opt, std::vector<double>* ts, std::vector<std::vector<double>>* ys,
              const std::function<bool(double, const std::vector<double>&, double,
                                       const std::vector<double>&)>& on_step = nullptr) {
  Core out;
  const int n = static_cast<int>(y.size());
  const double span = t1 - t0;
  const double dir = (span >= 0) ? 1.0 : -1.0;
  const double hmax = (opt.max_step > 0) ? opt.max_step : std::abs(span);
  double h = (opt.initial_step > 0) ? std::min(opt.initial_step, hmax)
                                    : std::min(1e-2 * std::abs(span), hmax);
  if (h == 0.0) h = 1e-6;
  h *= dir;

  Stepper st(rhs, n);
  double t = t0;
  if (ts) {
    ts->push_back(t);
    ys->push_back(y);
  }
  if (t0 == t1) {
    out.t_end = t;
    out.y_end = y;
    return out;
  }
  st.rhs(t, y, st.k1);
  bool k1_fresh = true;

  while (true) {
    if (++out.steps > opt.max_steps) {
      out.stop = OdeStop::MaxSteps;
      break;
    }
    if (std::abs(h) < 1e-14 * std::abs(span)) {
      out.stop = OdeStop::StepUnderflow;
      break;
    }
    bool last = false;
    if ((t + h - t1) * dir >= 0.0) {
      h = t1 - t;
      last = true;
    }
    if (!k1_fresh) {
      st.rhs(t, y, st.k1);
      k1_fresh = true;
    }
    st.step(t, y, h);
    if (!all_finite(st.y5) || !all_finite(st.k7)) {
      // Retry smaller; if already tiny, give up.
      h *= 0.25;
      last = false;
      if (std::abs(h) < 1e-14 * std::abs(span)) {
        out.stop = OdeStop::NonFinite;
        break;
      }
      continue;
    }
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(st.y5[i]));
      const double e = (st.y5[i] - st.y4[i]) / sc;
      err += e * e;
    }
    err = std::sqrt(err / n);
    if (err <= 1.0) {
      const double t_new = t + h;
      if (on_step && !on_step(t, y, t_new, st.y5)) {
        // Event layer asked to stop; state already recorded by the callback.
        out.stop = OdeStop::Event;
        t = t_new;
        y = st.y5;
        break;
      }
      t = t_new;
      y = st.y5;
      std::swap(st.k1, st.k7);  // first-same-as-last
      k1_fresh = true;
      if (ts) {
        ts->push_back(t);
        ys->push_back(y);
      }
      if (last) break;
      const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
      h = dir * std::min(std::abs(h) * fac, hmax);
    } else {
      const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
      h *= fac;
      k1_fresh = true;  // k1 still valid at (t, y)
    }
  }
  out.t_end = t;
  out.y_end = y;
  return out;
}

}  // namespace

const char* ode_stop_name(OdeStop s) {
  switch (s) {
    case OdeStop::ReachedEnd:
      return "reached_end";
    case OdeStop::Event:
      return "event";
    case OdeStop::StepUnderflow:
      return "step_underflow";
    case OdeStop::MaxSteps:
      return "max_steps";
    case OdeStop::NonFinite:
      return "non_finite";
  }
  return "unknown";
}

std::vector<double> OdeSolution::eval(double t) const {
  if (ts_.empty()) throw std::runtime_error("OdeSolution::eval on empty solution");
  const double dir = (ts_.back() >= ts_.front()) ? 1.0 : -1.0;
  if ((t - ts_.front()) * dir < -1e-12 || (t - ts_.back()) * dir > 1e-12)
    throw std::out_of_range("OdeSolution::eval outside integrated span");
  // nearest node not past t (direction-aware)
  size_t lo = 0, hi = ts_.size() - 1;
  while (lo < hi) {
    const size_t mid = (lo + hi + 1) / 2;
    if ((ts_[mid] - t) * dir <= 0.0)
      lo = mid;
    else
      hi = mid - 1;
  }
  if (ts_[lo] == t) return ys_[lo];
  OdeOptions opt = options_;
  opt.initial_step = 0.0;
  const Core c = run_core(rhs_, ys_[lo], ts_[lo], t, opt, nullptr, nullptr);
  if (c.stop != OdeStop::ReachedEnd)
    throw std::runtime_error("OdeSolution::eval re-integration failed");
  return c.y_end;
}

OdeSolution integrate(const OdeRhs& rhs, std::vector<double> y0, double t0, double t1,
                      const OdeOptions& options, const std::vector<OdeEventSpec>& events) {
  OdeSolution sol;
  sol.rhs_ = rhs;
  sol.options_ = options;

  std::vector<double> gprev(events.size());
  bool have_prev = false;
  std::optional<OdeEventHit> hit;

  auto locate = [&](int which, double ta, const std::vector<double>& ya, double tb) {
    // Bisection on the event function; inner integrations restart from (ta, ya).
    double lo = ta, hi = tb;
    auto value_at = [&](double tm) {
      const Core c = run_core(rhs, ya, ta, tm, options, nullptr, nullptr);
      return std::pair<double, std::vector<double>>(events[which].value(tm, c.y_end), c.y_end);
    };
    double glo = events[which].value(ta, ya);
    std::vector<double> ybest = ya;
    double tbest = ta;
    for (int it = 0; it < 200; ++it) {
      if (std::abs(hi - lo) <= 1e-10 * std::max(1.0, std::abs(hi))) break;
      const double mid = 0.5 * (lo + hi);
      auto [gm, ym] = value_at(mid);
      const bool crossed = (glo <= 0 && gm >= 0) || (glo >= 0 && gm <= 0);
      if (crossed) {
        hi = mid;
        tbest = mid;
        ybest = ym;
      } else {
        lo = mid;
        glo = gm;
        tbest = mid;
        ybest = ym;
      }
    }
    OdeEventHit h;
    h.name = events[which].name;
    h.t = tbest;
    h.y = ybest;
    return h;
  };

  auto on_step = [&](double ta, const std::vector<double>& ya, double tb,
                     const std::vector<double>& yb) {
    if (events.empty()) return true;
    if (!have_prev) {
      for (size_t i = 0; i < events.size(); ++i) gprev[i] = events[i].value(ta, ya);
      have_prev = true;
    }
    for (size_t i = 0; i < events.size(); ++i) {
      const double ga = gprev[i];
      const double gb = events[i].value(tb, yb);
      const bool rising = ga < 0 && gb >= 0;
      const bool falling = ga > 0 && gb <= 0;
      const int dir = events[i].direction;
      const bool match = (dir == 0 && (rising || falling)) || (dir > 0 && rising) ||
                         (dir < 0 && falling);
      if (match) {
        hit = locate(static_cast<int>(i), ta, ya, tb);
        return false;
      }
      gprev[i] = gb;
    }
    return true;
  };

  Core core = run_core(rhs, std::move(y0), t0, t1, options, &sol.ts_, &sol.ys_, on_step);
  sol.steps_ = core.steps;
  sol.stop_ = core.stop;
  if (hit) {
    sol.stop_ = OdeStop::Event;
    sol.event_ = hit;
    // Truncate the skeleton at the event point.
    while (!sol.ts_.empty() && (sol.ts_.back() - hit->t) * ((t1 >= t0) ? 1.0 : -1.0) > 0.0) {
      sol.ts_.pop_back();
      sol.ys_.pop_back();
    }
    sol.ts_.push_back(hit->t);
    sol.ys_.push_back(hit->y);
  }
  return sol;
}

}  // namespace heis4
