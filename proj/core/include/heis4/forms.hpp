#pragma once

#include <cmath>
#include <memory>
#include <utility>

#include "heis4/jet.hpp"
#include "heis4/linalg.hpp"
#include "heis4/weyl.hpp"

namespace heis4 {

// Differential forms on the chart (t, x, y, z), stored by lowered components:
// a one-form as its coefficient vector, a two-form as the antisymmetric matrix
// w_{mn}, a three-form as the fully antisymmetric Ten3. Fields evaluate at
// plain points and at first-order jet points; the jet path is what the
// exterior derivative consumes.

class OneFormField {
 public:
  virtual ~OneFormField() = default;
  virtual Vec4<double> components(const Vec4<double>& p) const = 0;
  virtual Vec4<J1> components(const Vec4<J1>& p) const = 0;
};

class TwoFormField {
 public:
  virtual ~TwoFormField() = default;
  virtual Mat4<double> components(const Vec4<double>& p) const = 0;
  virtual Mat4<J1> components(const Vec4<J1>& p) const = 0;
};

template <class F>
class AnalyticOneForm final : public OneFormField {
 public:
  explicit AnalyticOneForm(F f) : f_(std::move(f)) {}
  Vec4<double> components(const Vec4<double>& p) const override { return f_(p); }
  Vec4<J1> components(const Vec4<J1>& p) const override { return f_(p); }

 private:
  F f_;
};

template <class F>
class AnalyticTwoForm final : public TwoFormField {
 public:
  explicit AnalyticTwoForm(F f) : f_(std::move(f)) {}
  Mat4<double> components(const Vec4<double>& p) const override { return f_(p); }
  Mat4<J1> components(const Vec4<J1>& p) const override { return f_(p); }

 private:
  F f_;
};

class OneForm {
 public:
  OneForm() = default;
  explicit OneForm(std::shared_ptr<const OneFormField> field) : field_(std::move(field)) {}

  template <class F>
  static OneForm analytic(F f) {
    return OneForm(std::make_shared<AnalyticOneForm<F>>(std::move(f)));
  }

  const OneFormField& field() const { return *field_; }
  bool valid() const { return static_cast<bool>(field_); }

  template <class S>
  Vec4<S> components(const Vec4<S>& p) const {
    return field_->components(p);
  }

 private:
  std::shared_ptr<const OneFormField> field_;
};

class TwoForm {
 public:
  TwoForm() = default;
  explicit TwoForm(std::shared_ptr<const TwoFormField> field) : field_(std::move(field)) {}

  template <class F>
  static TwoForm analytic(F f) {
    return TwoForm(std::make_shared<AnalyticTwoForm<F>>(std::move(f)));
  }

  const TwoFormField& field() const { return *field_; }
  bool valid() const { return static_cast<bool>(field_); }

  template <class S>
  Mat4<S> components(const Vec4<S>& p) const {
    return field_->components(p);
  }

 private:
  std::shared_ptr<const TwoFormField> field_;
};

namespace detail {
template <class S>
S abs_scalar(const S& u) {
  return value_of(u) < 0.0 ? -u : u;
}
}  // namespace detail

// Assemble the three-form (dw)_{mnr} = d_m w_{nr} + d_n w_{rm} + d_r w_{mn}
// from a jet evaluation of the two-form components.
inline Ten3<double> three_form_from_jet(const Mat4<J1>& c) {
  Ten3<double> d;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      for (int r = 0; r < 4; ++r)
        d[m][n][r] = c[n][r].d[m] + c[r][m].d[n] + c[m][n].d[r];
  return d;
}

inline Mat4<double> exterior_derivative(const OneFormField& w, const Vec4<double>& p) {
  const Vec4<J1> c = w.components(seed_point(p));
  Mat4<double> d = mat4_zero<double>();
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) d[m][n] = c[n].d[m] - c[m].d[n];
  return d;
}

inline Ten3<double> exterior_derivative(const TwoFormField& w, const Vec4<double>& p) {
  return three_form_from_jet(w.components(seed_point(p)));
}

inline Mat4<double> exterior_derivative(const OneForm& w, const Vec4<double>& p) {
  return exterior_derivative(w.field(), p);
}
inline Ten3<double> exterior_derivative(const TwoForm& w, const Vec4<double>& p) {
  return exterior_derivative(w.field(), p);
}

inline double max_abs_ten3(const Ten3<double>& t) {
  double r = 0.0;
  for (const auto& a : t)
    for (const auto& row : a)
      for (double v : row) r = std::max(r, std::abs(v));
  return r;
}

// Coefficient of the volume form against dt^dx^dy^dz: ori * sqrt|det g|.
template <class S>
S volume_coefficient(const S& detg, int ori) {
  using std::sqrt;
  return static_cast<double>(ori) * sqrt(detail::abs_scalar(detg));
}

// Pointwise Hodge star of a single two-form,
//   (star w)_{ab} = 1/2 vol_{ab}^{cd} w_{cd},
// the same convention as the pair-basis star_operator but generic over the
// scalar, so jets flow through and the star can be differentiated.
template <class S>
Mat4<S> star_two_form(const Mat4<S>& ginv, const S& detg, int ori, const Mat4<S>& w) {
  Mat4<S> wup;  // w^{cd}
  for (int c = 0; c < 4; ++c)
    for (int d = 0; d < 4; ++d) {
      S acc(0.0);
      for (int e = 0; e < 4; ++e)
        for (int f = 0; f < 4; ++f) acc = acc + ginv[c][e] * ginv[d][f] * w[e][f];
      wup[c][d] = acc;
    }
  const S s = volume_coefficient(detg, ori);
  Mat4<S> out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      S acc(0.0);
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          const int sign = perm_sign4(a, b, c, d);
          if (sign != 0) acc = acc + static_cast<double>(sign) * wup[c][d];
        }
      out[a][b] = 0.5 * (s * acc);
    }
  return out;
}

// Coefficient of alpha ^ beta against dt^dx^dy^dz for two two-forms.
template <class S>
S wedge_top_coefficient(const Mat4<S>& a, const Mat4<S>& b) {
  return a[0][1] * b[2][3] - a[0][2] * b[1][3] + a[0][3] * b[1][2] +
         b[0][1] * a[2][3] - b[0][2] * a[1][3] + b[0][3] * a[1][2];
}

}  // namespace heis4
