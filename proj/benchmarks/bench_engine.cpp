#include <benchmark/benchmark.h>

#include "heis4/curvature.hpp"

using namespace heis4;

namespace {

Metric hyperbolic4() {
  return Metric::analytic([](const auto& p) {
    using S = std::decay_t<decltype(p[0])>;
    using std::exp;
    Mat4<S> g = mat4_zero<S>();
    g[0][0] = S(1.0);
    const S w = exp(2.0 * p[0]);
    for (int i = 1; i < 4; ++i) g[i][i] = w;
    return g;
  });
}

void bm_curvature_double(benchmark::State& state) {
  const Metric m = hyperbolic4();
  const Vec4<double> p{0.4, 1.0, -0.7, 0.2};
  for (auto _ : state) {
    auto c = curvature_at(m.field(), p);
    benchmark::DoNotOptimize(c.kretschmann);
  }
}
BENCHMARK(bm_curvature_double);

void bm_covariant_riemann(benchmark::State& state) {
  const Metric m = hyperbolic4();
  const Vec4<double> p{0.4, 1.0, -0.7, 0.2};
  for (auto _ : state) {
    auto cov = covariant_riemann(m.field(), p);
    benchmark::DoNotOptimize(cov.max_component);
  }
}
BENCHMARK(bm_covariant_riemann);

}  // namespace

BENCHMARK_MAIN();
