#pragma once

#include <functional>

namespace heis4 {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Adaptive bisection over fixed-order Gauss-Legendre panels; nodes and weights
// are generated at startup by Newton iteration on the Legendre recurrence.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rtol = 1e-12, double atol = 1e-14, int max_depth = 52);

// Integrals whose integrand behaves like (x-a)^(-1/2) or (b-x)^(-1/2) at a
// marked endpoint: the substitution u^2 = distance-to-endpoint regularizes the
// panel before the adaptive pass.
QuadResult integrate_sqrt_endpoints(const std::function<double(double)>& f, double a, double b,
                                    bool singular_at_a, bool singular_at_b, double rtol = 1e-12,
                                    double atol = 1e-14);

}  // namespace heis4
