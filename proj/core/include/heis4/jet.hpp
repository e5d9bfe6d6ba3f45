#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <type_traits>

namespace heis4 {

// Univariate truncated Taylor expansion, c[n] = f^(n)(t)/n! for n <= 3.
// Order 3 suffices for every consumer: third t-derivatives of frame entries
// feed second derivatives of the metric plus one covariant-derivative layer.
struct Taylor4 {
  std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

  static Taylor4 constant(double v) { return Taylor4{{v, 0.0, 0.0, 0.0}}; }
  static Taylor4 variable(double t) { return Taylor4{{t, 1.0, 0.0, 0.0}}; }

  double value() const { return c[0]; }
  // n-th derivative, n <= 3
  double deriv(int n) const {
    static constexpr double fact[4] = {1.0, 1.0, 2.0, 6.0};
    return c[static_cast<std::size_t>(n)] * fact[n];
  }
};

inline Taylor4 operator+(const Taylor4& a, const Taylor4& b) {
  Taylor4 r;
  for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}
inline Taylor4 operator-(const Taylor4& a, const Taylor4& b) {
  Taylor4 r;
  for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}
inline Taylor4 operator-(const Taylor4& a) {
  Taylor4 r;
  for (int i = 0; i < 4; ++i) r.c[i] = -a.c[i];
  return r;
}
inline Taylor4 operator*(const Taylor4& a, const Taylor4& b) {
  Taylor4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; i + j < 4; ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}
inline Taylor4 operator+(const Taylor4& a, double s) { return a + Taylor4::constant(s); }
inline Taylor4 operator+(double s, const Taylor4& a) { return a + Taylor4::constant(s); }
inline Taylor4 operator-(const Taylor4& a, double s) { return a - Taylor4::constant(s); }
inline Taylor4 operator-(double s, const Taylor4& a) { return Taylor4::constant(s) - a; }
inline Taylor4 operator*(const Taylor4& a, double s) {
  Taylor4 r;
  for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] * s;
  return r;
}
inline Taylor4 operator*(double s, const Taylor4& a) { return a * s; }
inline Taylor4 operator/(const Taylor4& a, const Taylor4& b) {
  if (b.c[0] == 0.0) throw std::domain_error("Taylor4: division by series with zero value");
  Taylor4 r;
  for (int n = 0; n < 4; ++n) {
    double s = a.c[n];
    for (int j = 0; j < n; ++j) s -= r.c[j] * b.c[n - j];
    r.c[n] = s / b.c[0];
  }
  return r;
}
inline Taylor4 operator/(const Taylor4& a, double s) { return a * (1.0 / s); }
inline Taylor4 operator/(double s, const Taylor4& a) { return Taylor4::constant(s) / a; }

namespace detail {
// Composes an analytic germ with a series: given the derivatives f^(n)(u0)
// and the series u (u.c[0] == u0), returns f(u) via Horner in (u - u0).
inline Taylor4 compose_germ(const std::array<double, 4>& df, const Taylor4& u) {
  Taylor4 delta = u;
  delta.c[0] = 0.0;
  Taylor4 r = Taylor4::constant(df[3] / 6.0);
  r = r * delta + Taylor4::constant(df[2] / 2.0);
  r = r * delta + Taylor4::constant(df[1]);
  r = r * delta + Taylor4::constant(df[0]);
  return r;
}
}  // namespace detail

inline Taylor4 exp(const Taylor4& u) {
  const double e = std::exp(u.c[0]);
  return detail::compose_germ({e, e, e, e}, u);
}
inline Taylor4 log(const Taylor4& u) {
  const double x = u.c[0];
  if (x <= 0.0) throw std::domain_error("Taylor4: log of non-positive value");
  return detail::compose_germ({std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)}, u);
}
inline Taylor4 pow(const Taylor4& u, double alpha) {
  const double x = u.c[0];
  if (x <= 0.0) throw std::domain_error("Taylor4: pow base must be positive");
  const double p0 = std::pow(x, alpha);
  const double p1 = alpha * p0 / x;
  const double p2 = alpha * (alpha - 1.0) * p0 / (x * x);
  const double p3 = alpha * (alpha - 1.0) * (alpha - 2.0) * p0 / (x * x * x);
  return detail::compose_germ({p0, p1, p2, p3}, u);
}
inline Taylor4 sqrt(const Taylor4& u) { return pow(u, 0.5); }
inline Taylor4 sin(const Taylor4& u) {
  const double s = std::sin(u.c[0]), c = std::cos(u.c[0]);
  return detail::compose_germ({s, c, -s, -c}, u);
}
inline Taylor4 cos(const Taylor4& u) {
  const double s = std::sin(u.c[0]), c = std::cos(u.c[0]);
  return detail::compose_germ({c, -s, -c, s}, u);
}
inline Taylor4 sinh(const Taylor4& u) {
  const double s = std::sinh(u.c[0]), c = std::cosh(u.c[0]);
  return detail::compose_germ({s, c, s, c}, u);
}
inline Taylor4 cosh(const Taylor4& u) {
  const double s = std::sinh(u.c[0]), c = std::cosh(u.c[0]);
  return detail::compose_germ({c, s, c, s}, u);
}

// f (a series centered at g.c[0]) evaluated along g.
inline Taylor4 compose(const Taylor4& f, const Taylor4& g) {
  Taylor4 delta = g;
  delta.c[0] = 0.0;
  Taylor4 r = Taylor4::constant(f.c[3]);
  r = r * delta + Taylor4::constant(f.c[2]);
  r = r * delta + Taylor4::constant(f.c[1]);
  r = r * delta + Taylor4::constant(f.c[0]);
  return r;
}

// Term-wise antiderivative with zero constant; degree-3 coefficient of the
// input has nowhere to go and must be dealt with by the caller (Picard
// iterations only consume orders that remain exact).
inline Taylor4 antiderivative(const Taylor4& u) {
  return Taylor4{{0.0, u.c[0], u.c[1] / 2.0, u.c[2] / 3.0}};
}

// Multivariate forward-mode jet over scalar S with four partial slots, one per
// chart coordinate. Nesting Jet<Jet<double>> etc. yields exact higher partials.
template <class S>
struct Jet {
  S v{};
  std::array<S, 4> d{};

  Jet() : v(0.0) {}
  Jet(double x) : v(x) {}
  template <class T = S, class = std::enable_if_t<!std::is_same_v<T, double>>>
  Jet(const S& x) : v(x) {}
};

using J1 = Jet<double>;
using J2 = Jet<J1>;
using J3 = Jet<J2>;

inline double value_of(double x) { return x; }
template <class S>
double value_of(const Jet<S>& j) {
  return value_of(j.v);
}

template <class S>
Jet<S> operator+(const Jet<S>& a, const Jet<S>& b) {
  Jet<S> r;
  r.v = a.v + b.v;
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] + b.d[i];
  return r;
}
template <class S>
Jet<S> operator-(const Jet<S>& a, const Jet<S>& b) {
  Jet<S> r;
  r.v = a.v - b.v;
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] - b.d[i];
  return r;
}
template <class S>
Jet<S> operator-(const Jet<S>& a) {
  Jet<S> r;
  r.v = -a.v;
  for (int i = 0; i < 4; ++i) r.d[i] = -a.d[i];
  return r;
}
template <class S>
Jet<S> operator*(const Jet<S>& a, const Jet<S>& b) {
  Jet<S> r;
  r.v = a.v * b.v;
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}
template <class S>
Jet<S> operator/(const Jet<S>& a, const Jet<S>& b) {
  Jet<S> r;
  r.v = a.v / b.v;
  for (int i = 0; i < 4; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) / b.v;
  return r;
}
template <class S>
Jet<S> operator+(const Jet<S>& a, double s) {
  Jet<S> r = a;
  r.v = a.v + s;
  return r;
}
template <class S>
Jet<S> operator+(double s, const Jet<S>& a) {
  return a + s;
}
template <class S>
Jet<S> operator-(const Jet<S>& a, double s) {
  return a + (-s);
}
template <class S>
Jet<S> operator-(double s, const Jet<S>& a) {
  return Jet<S>(s) - a;
}
template <class S>
Jet<S> operator*(const Jet<S>& a, double s) {
  Jet<S> r;
  r.v = a.v * s;
  for (int i = 0; i < 4; ++i) r.d[i] = a.d[i] * s;
  return r;
}
template <class S>
Jet<S> operator*(double s, const Jet<S>& a) {
  return a * s;
}
template <class S>
Jet<S> operator/(const Jet<S>& a, double s) {
  return a * (1.0 / s);
}
template <class S>
Jet<S> operator/(double s, const Jet<S>& a) {
  return Jet<S>(s) / a;
}

template <class S>
Jet<S> sqrt(const Jet<S>& u) {
  using std::sqrt;
  Jet<S> r;
  r.v = sqrt(u.v);
  const S half_inv = 0.5 / r.v;
  for (int i = 0; i < 4; ++i) r.d[i] = u.d[i] * half_inv;
  return r;
}
template <class S>
Jet<S> exp(const Jet<S>& u) {
  using std::exp;
  Jet<S> r;
  r.v = exp(u.v);
  for (int i = 0; i < 4; ++i) r.d[i] = u.d[i] * r.v;
  return r;
}
template <class S>
Jet<S> log(const Jet<S>& u) {
  using std::log;
  Jet<S> r;
  r.v = log(u.v);
  for (int i = 0; i < 4; ++i) r.d[i] = u.d[i] / u.v;
  return r;
}
template <class S>
Jet<S> pow(const Jet<S>& u, double alpha) {
  using std::pow;
  Jet<S> r;
  r.v = pow(u.v, alpha);
  const S factor = alpha * pow(u.v, alpha - 1.0);
  for (int i = 0; i < 4; ++i) r.d[i] = u.d[i] * factor;
  return r;
}
template <class S>
Jet<S> sin(const Jet<S>& u) {
  using std::cos;
  using std::sin;
  Jet<S> r;
  r.v = sin(u.v);
  const S c = cos(u.v);
  for (int i = 0; i < 4; ++i) r.d[i] = u.d[i] * c;
  return r;
}
template <class S>
Jet<S> cos(const Jet<S>& u) {
  using std::cos;
  using std::sin;
  Jet<S> r;
  r.v = cos(u.v);
  const S s = -sin(u.v);
  for (int i = 0; i < 4; ++i) r.d[i] = u.d[i] * s;
  return r;
}
template <class S>
Jet<S> sinh(const Jet<S>& u) {
  using std::cosh;
  using std::sinh;
  Jet<S> r;
  r.v = sinh(u.v);
  const S c = cosh(u.v);
  for (int i = 0; i < 4; ++i) r.d[i] = u.d[i] * c;
  return r;
}
template <class S>
Jet<S> cosh(const Jet<S>& u) {
  using std::cosh;
  using std::sinh;
  Jet<S> r;
  r.v = cosh(u.v);
  const S s = sinh(u.v);
  for (int i = 0; i < 4; ++i) r.d[i] = u.d[i] * s;
  return r;
}

// Evaluates a Taylor expansion (centered at value_of(t)) at the jet t.
// The offset t - value_of(t) is nilpotent in every nesting depth <= 3, so a
// Horner pass over all four coefficients is exact.
template <class S>
S taylor_eval(const Taylor4& f, const S& t) {
  S delta = t - value_of(t);
  S r(f.c[3]);
  r = r * delta + S(f.c[2]);
  r = r * delta + S(f.c[1]);
  r = r * delta + S(f.c[0]);
  return r;
}
inline double taylor_eval(const Taylor4& f, double) { return f.c[0]; }

}  // namespace heis4
