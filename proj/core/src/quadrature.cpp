#include "heis4/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace heis4 {

namespace {

constexpr int kOrder = 12;

struct GaussRule {
  std::array<double, kOrder> node;
  std::array<double, kOrder> weight;
};

GaussRule build_rule() {
  GaussRule rule{};
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < kOrder; ++i) {
    double x = std::cos(pi * (i + 0.75) / (kOrder + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int n = 2; n <= kOrder; ++n) {
        double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      double dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int n = 2; n <= kOrder; ++n) {
      double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    double dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
    rule.node[i] = x;
    rule.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& rule() {
  static const GaussRule r = build_rule();
  return r;
}

double panel(const std::function<double(double)>& f, double a, double b, int* evals) {
  const GaussRule& r = rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < kOrder; ++i) sum += r.weight[i] * f(mid + half * r.node[i]);
  *evals += kOrder;
  return sum * half;
}

struct Segment {
  double a, b, whole;
  int depth;
};

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rtol, double atol, int max_depth) {
  QuadResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }
  int evals = 0;
  std::vector<Segment> stack;
  stack.push_back({a, b, panel(f, a, b, &evals), 0});
  bool all_converged = true;
  while (!stack.empty()) {
    Segment seg = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (seg.a + seg.b);
    const double left = panel(f, seg.a, mid, &evals);
    const double right = panel(f, mid, seg.b, &evals);
    const double refined = left + right;
    const double diff = std::abs(refined - seg.whole);
    const double tol = std::max(atol, rtol * std::abs(refined));
    if (diff <= tol || seg.depth >= max_depth) {
      if (diff > tol) all_converged = false;
      result.value += refined;
      result.error_estimate += diff;
    } else {
      stack.push_back({seg.a, mid, left, seg.depth + 1});
      stack.push_back({mid, seg.b, right, seg.depth + 1});
    }
  }
  result.evaluations = evals;
  result.converged = all_converged && std::isfinite(result.value);
  return result;
}

QuadResult integrate_sqrt_endpoints(const std::function<double(double)>& f, double a, double b,
                                    bool singular_at_a, bool singular_at_b, double rtol,
                                    double atol) {
  if (b < a) throw std::invalid_argument("integrate_sqrt_endpoints: reversed interval");
  if (!singular_at_a && !singular_at_b) return integrate_adaptive(f, a, b, rtol, atol);

  QuadResult total;
  total.converged = true;
  auto accumulate = [&total](const QuadResult& part) {
    total.value += part.value;
    total.error_estimate += part.error_estimate;
    total.evaluations += part.evaluations;
    total.converged = total.converged && part.converged;
  };

  if (singular_at_a && singular_at_b) {
    const double mid = 0.5 * (a + b);
    accumulate(integrate_adaptive([&f, a](double u) { return 2.0 * u * f(a + u * u); }, 0.0,
                                  std::sqrt(mid - a), rtol, atol));
    accumulate(integrate_adaptive([&f, b](double u) { return 2.0 * u * f(b - u * u); }, 0.0,
                                  std::sqrt(b - mid), rtol, atol));
    return total;
  }
  if (singular_at_a) {
    accumulate(integrate_adaptive([&f, a](double u) { return 2.0 * u * f(a + u * u); }, 0.0,
                                  std::sqrt(b - a), rtol, atol));
    return total;
  }
  accumulate(integrate_adaptive([&f, b](double u) { return 2.0 * u * f(b - u * u); }, 0.0,
                                std::sqrt(b - a), rtol, atol));
  return total;
}

}  // namespace heis4
