#include "heis4/cubic.hpp"

#include <algorithm>
#include <cmath>

namespace heis4 {

std::complex<double> principal_cbrt(std::complex<double> z) {
  const double r = std::abs(z);
  if (r == 0.0) return {0.0, 0.0};
  const double th = std::arg(z);
  return std::polar(std::cbrt(r), th / 3.0);
}

std::complex<double> principal_pow23(std::complex<double> z) {
  const std::complex<double> c = principal_cbrt(z);
  return c * c;
}

std::array<std::complex<double>, 3> depressed_cubic_roots(double p, double q) {
  using C = std::complex<double>;
  const C disc = C(q * q / 4.0 + p * p * p / 27.0, 0.0);
  C core = -q / 2.0 + std::sqrt(disc);
  if (std::abs(core) == 0.0) core = -q / 2.0 - std::sqrt(disc);
  const C cr = principal_cbrt(core);
  std::array<C, 3> roots;
  const C w(-0.5, std::sqrt(3.0) / 2.0);
  C wm(1.0, 0.0);
  for (int m = 0; m < 3; ++m) {
    if (std::abs(cr) == 0.0) {
      roots[m] = C(0.0, 0.0);  // p == q == 0
    } else {
      const C wc = wm * cr;
      roots[m] = wc - p / (3.0 * wc);
    }
    wm *= w;
  }
  return roots;
}

int real_cubic_roots(double c2, double c1, double c0, std::array<double, 3>& out,
                     double imag_tol) {
  // depress: x = y - c2/3
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  const auto roots = depressed_cubic_roots(p, q);
  const double scale = std::max({1.0, std::abs(roots[0]), std::abs(roots[1]), std::abs(roots[2])});
  int n = 0;
  for (const auto& z : roots) {
    if (std::abs(z.imag()) <= imag_tol * scale) out[n++] = z.real() - shift;
  }
  std::sort(out.begin(), out.begin() + n);
  // A real cubic has one or three real roots; near-degenerate discriminants can
  // report two, in which case the conjugate pair straddles the axis and both
  // projections approximate the same double root.
  return n;
}

}  // namespace heis4
