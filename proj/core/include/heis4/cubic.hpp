#pragma once

#include <array>
#include <complex>

namespace heis4 {

// Principal cube root: |z|^(1/3) * exp(i*arg(z)/3) with arg in (-pi, pi].
// Every closed-form branch assembly in the catalog fixes this convention.
std::complex<double> principal_cbrt(std::complex<double> z);

// z^(2/3) is defined as (z^(1/3))^2, not (z^2)^(1/3); the two differ for
// negative real z and the catalog depends on the former.
std::complex<double> principal_pow23(std::complex<double> z);

// Roots of x^3 + p x + q = 0 via the Cardano assembly
//   x_m = w_m * C - p / (3 * w_m * C),  C = cbrt(-q/2 + sqrt(q^2/4 + p^3/27)),
// with w_m the three cube roots of unity ordered {1, e^{2pi i/3}, e^{4pi i/3}}.
std::array<std::complex<double>, 3> depressed_cubic_roots(double p, double q);

// All real roots of x^3 + c2 x^2 + c1 x + c0, tolerance-deduplicated.
// Returns the count and writes ascending roots into out.
int real_cubic_roots(double c2, double c1, double c0, std::array<double, 3>& out,
                     double imag_tol = 1e-9);

}  // namespace heis4
