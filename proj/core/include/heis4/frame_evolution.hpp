#pragma once

#include <functional>
#include <limits>
#include <string>

#include "heis4/heisenberg.hpp"
#include "heis4/metric.hpp"

namespace heis4 {

// Scalar function of t exposed through its truncated Taylor expansion so that
// jet-valued chart points receive exact derivatives up to order 3.
class TimeFunction {
 public:
  TimeFunction() : fn_([](const Taylor4&) { return Taylor4::constant(0.0); }) {}
  explicit TimeFunction(std::function<Taylor4(const Taylor4&)> fn) : fn_(std::move(fn)) {}

  static TimeFunction constant(double v) {
    return TimeFunction([v](const Taylor4&) { return Taylor4::constant(v); });
  }

  Taylor4 series(double t) const { return fn_(Taylor4::variable(t)); }
  double operator()(double t) const { return series(t).c[0]; }
  double deriv(double t, int n = 1) const { return series(t).deriv(n); }

  template <class S>
  S eval(const S& t) const {
    return taylor_eval(series(value_of(t)), t);
  }

 private:
  std::function<Taylor4(const Taylor4&)> fn_;
};

// One-parameter family of frames e^t_i = U(t)_{ij} e_j over the labeled
// invariant frame, together with the constant frame metric:
//   g = eps dt^2 + eta_{ij} eth^i (x) eth^j,   eth^i the coframe dual to e^t_i.
// Entry patterns by labeling:
//   TimelikeOrRiemannian: U = [[a,0,0],[0,b,0],[0,h,c]], eta = diag(eps,1,1)
//   Spacelike:            U = [[c,h,0],[-h,b,0],[0,0,a]], eta = diag(eps,1,1)
//   Lightlike:            U = [[1,0,0],[f,b,p],[0,0,a]],  eta = Witt pairing
struct FrameEvolution {
  CenterLabeling labeling = CenterLabeling::TimelikeOrRiemannian;
  int eps = 1;
  double k = 1.0;
  double t0 = 0.0;
  double t_min = -std::numeric_limits<double>::infinity();
  double t_max = std::numeric_limits<double>::infinity();
  TimeFunction a = TimeFunction::constant(1.0);
  TimeFunction b = TimeFunction::constant(1.0);
  TimeFunction c = TimeFunction::constant(1.0);
  TimeFunction h = TimeFunction::constant(0.0);
  TimeFunction f = TimeFunction::constant(0.0);
  TimeFunction p = TimeFunction::constant(0.0);
};

Mat3<double> frame_metric_eta(const FrameEvolution& ev);

void check_time_in_domain(const FrameEvolution& ev, double t);

template <class S>
Mat3<S> frame_matrix(const FrameEvolution& ev, const S& t) {
  Mat3<S> u = mat3_zero<S>();
  switch (ev.labeling) {
    case CenterLabeling::TimelikeOrRiemannian:
      u[0][0] = ev.a.eval(t);
      u[1][1] = ev.b.eval(t);
      u[2][1] = ev.h.eval(t);
      u[2][2] = ev.c.eval(t);
      break;
    case CenterLabeling::Spacelike:
      u[0][0] = ev.c.eval(t);
      u[0][1] = ev.h.eval(t);
      u[1][0] = S(0.0) - ev.h.eval(t);
      u[1][1] = ev.b.eval(t);
      u[2][2] = ev.a.eval(t);
      break;
    case CenterLabeling::Lightlike:
      u[0][0] = S(1.0);
      u[1][0] = ev.f.eval(t);
      u[1][1] = ev.b.eval(t);
      u[1][2] = ev.p.eval(t);
      u[2][2] = ev.a.eval(t);
      break;
  }
  return u;
}

// Rows of the evolved coframe eth^i in chart components.
template <class S>
std::array<Vec4<S>, 3> evolved_coframe(const FrameEvolution& ev, const Vec4<S>& pt) {
  check_time_in_domain(ev, value_of(pt[0]));
  const Mat3<S> u = frame_matrix(ev, pt[0]);
  const Mat3<S> uinv = mat3_inverse(u);
  const auto base = labeled_coframe(ev.k, ev.labeling, pt);
  std::array<Vec4<S>, 3> rows;
  for (int i = 0; i < 3; ++i) {
    for (int mu = 0; mu < 4; ++mu) {
      S s(0.0);
      for (int m = 0; m < 3; ++m) s = s + uinv[m][i] * base[m][mu];
      rows[i][mu] = s;
    }
  }
  return rows;
}

template <class S>
Mat4<S> evolution_metric_components(const FrameEvolution& ev, const Vec4<S>& pt) {
  check_time_in_domain(ev, value_of(pt[0]));
  const Mat3<S> u = frame_matrix(ev, pt[0]);
  const Mat3<S> uinv = mat3_inverse(u);
  const Mat3<double> eta = frame_metric_eta(ev);
  // Q = U^{-1} eta U^{-T}: the frame metric pushed to the invariant coframe.
  Mat3<S> q = mat3_zero<S>();
  for (int m = 0; m < 3; ++m)
    for (int n = 0; n < 3; ++n) {
      S s(0.0);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (eta[i][j] == 0.0) continue;
          s = s + eta[i][j] * (uinv[m][i] * uinv[n][j]);
        }
      q[m][n] = s;
    }
  const auto base = labeled_coframe(ev.k, ev.labeling, pt);
  Mat4<S> g = mat4_zero<S>();
  g[0][0] = S(static_cast<double>(ev.eps));
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      S s = g[mu][nu];
      for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) s = s + q[m][n] * (base[m][mu] * base[n][nu]);
      g[mu][nu] = s;
    }
  return g;
}

Metric metric_from_evolution(const FrameEvolution& ev);

// Instantaneous logarithmic rates (center scale, transverse scale).
struct StationarityDiagnostics {
  double mu;
  double lambda;
};
StationarityDiagnostics stationarity_diagnostics(const FrameEvolution& ev, double t);

}  // namespace heis4
