#include "heis4/solution_forms.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

#include "heis4/curvature.hpp"
#include "heis4/frame_evolution.hpp"

namespace heis4 {

namespace {

// dt ^ e for a coframe row e with no dt component.
template <class S>
Mat4<S> dt_wedge(const Vec4<S>& e) {
  Mat4<S> b = mat4_zero<S>();
  for (int n = 1; n < 4; ++n) {
    b[0][n] = e[n];
    b[n][0] = S(0.0) - e[n];
  }
  return b;
}

struct TripleJets {
  Vec4<J1> q;
  std::array<Mat4<J1>, 3> omega;
  J1 detg{};
};

TripleJets triple_jets(const FrameEvolution& ev, int ori, const Vec4<double>& p) {
  TripleJets out;
  out.q = seed_point(p);
  const auto rows = evolved_coframe<J1>(ev, out.q);
  const Mat4<J1> g = evolution_metric_components<J1>(ev, out.q);
  const Mat4<J1> ginv = mat4_inverse(g, &out.detg);
  for (int i = 0; i < 3; ++i) {
    const Mat4<J1> b = dt_wedge<J1>(rows[i]);
    const Mat4<J1> st = star_two_form<J1>(ginv, out.detg, ori, b);
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) out.omega[i][m][n] = b[m][n] + st[m][n];
  }
  return out;
}

Mat4<J1> scaled(const J1& s, const Mat4<J1>& w) {
  Mat4<J1> r;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) r[m][n] = s * w[m][n];
  return r;
}

Mat4<double> value_mat(const Mat4<J1>& w) {
  Mat4<double> r;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) r[m][n] = w[m][n].v;
  return r;
}

class SolutionTwoForm final : public TwoFormField {
 public:
  SolutionTwoForm(Solution sol, int idx, int ori, FormScale scale)
      : sol_(std::move(sol)), idx_(idx), ori_(ori), scale_(scale) {}

  Mat4<double> components(const Vec4<double>& p) const override { return eval<double>(p); }
  Mat4<J1> components(const Vec4<J1>& p) const override { return eval<J1>(p); }

 private:
  template <class S>
  Mat4<S> eval(const Vec4<S>& p) const {
    const auto rows = evolved_coframe<S>(sol_.evolution, p);
    const Mat4<S> g = evolution_metric_components<S>(sol_.evolution, p);
    S detg;
    const Mat4<S> ginv = mat4_inverse(g, &detg);
    const Mat4<S> b = dt_wedge<S>(rows[idx_]);
    const Mat4<S> st = star_two_form<S>(ginv, detg, ori_, b);
    S s(1.0);
    if (scale_ == FormScale::CoefficientProduct) {
      s = sol_.evolution.a.eval(p[0]) * sol_.evolution.b.eval(p[0]);
    } else if (scale_ == FormScale::WeylPower) {
      using std::pow;
      const auto cd = curvature_at<S>(sol_.metric.field(), p);
      s = pow(detail::abs_scalar(weyl_square(cd)), 1.0 / 3.0);
    }
    Mat4<S> w;
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) w[m][n] = s * (b[m][n] + st[m][n]);
    return w;
  }

  Solution sol_;
  int idx_;
  int ori_;
  FormScale scale_;
};

}  // namespace

TwoForm solution_two_form(const Solution& sol, int index, int ori, FormScale scale) {
  if (index < 1 || index > 3)
    throw std::invalid_argument("solution_two_form: index must be 1, 2, or 3");
  return TwoForm(std::make_shared<SolutionTwoForm>(sol, index - 1, ori, scale));
}

std::array<TwoForm, 3> solution_form_triple(const Solution& sol, int ori) {
  return {solution_two_form(sol, 1, ori), solution_two_form(sol, 2, ori),
          solution_two_form(sol, 3, ori)};
}

int center_form_index(CenterLabeling labeling) {
  return labeling == CenterLabeling::Spacelike ? 3 : 1;
}

TripleResiduals parallel_triple_residuals(const Solution& sol, int ori, const Vec4<double>& p) {
  const auto tj = triple_jets(sol.evolution, ori, p);
  TripleResiduals out;
  std::array<Mat4<double>, 3> vals;
  for (int i = 0; i < 3; ++i) {
    out.closure = std::max(out.closure, max_abs_ten3(three_form_from_jet(tj.omega[i])));
    vals[i] = value_mat(tj.omega[i]);
  }
  const Mat3<double> eta = frame_metric_eta(sol.evolution);
  const double vol = volume_coefficient(value_of(tj.detg), ori);
  const double eps = sol.evolution.eps;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const double got = wedge_top_coefficient(vals[i], vals[j]);
      out.wedge = std::max(out.wedge, std::abs(got - 2.0 * eps * eta[i][j] * vol));
    }
  return out;
}

ClosureResiduals conformal_closure_residuals(const Solution& sol, int ori, const Vec4<double>& p) {
  const auto tj = triple_jets(sol.evolution, ori, p);
  const int ci = center_form_index(sol.evolution.labeling) - 1;
  ClosureResiduals out;
  const auto cd = curvature_at<J1>(sol.metric.field(), tj.q);
  const J1 phi = pow(detail::abs_scalar(weyl_square(cd)), 1.0 / 3.0);
  out.center = max_abs_ten3(three_form_from_jet(scaled(phi, tj.omega[ci])));
  const J1 ab = sol.evolution.a.eval(tj.q[0]) * sol.evolution.b.eval(tj.q[0]);
  for (int i = 0; i < 3; ++i) {
    if (i == ci) continue;
    out.pair = std::max(out.pair, max_abs_ten3(three_form_from_jet(scaled(ab, tj.omega[i]))));
  }
  return out;
}

}  // namespace heis4
