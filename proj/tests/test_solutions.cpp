#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "heis4/curvature.hpp"
#include "heis4/ode.hpp"
#include "heis4/solutions.hpp"
#include "heis4/weyl.hpp"

using namespace heis4;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Vec4<double> pt(double t, double x, double y, double z) { return {t, x, y, z}; }

// Reference values below were computed independently at 40-digit precision
// from the closed-form expressions (root census, slope resolvent, profile
// functions and their flow-time integrals).

}  // namespace

TEST_CASE("root census: exact anchor points") {
  // eps*lambda = -6 k^2 makes gamma vanish and rho_1 = 1/(2k^2).
  auto r6 = cubic_rho_roots(1.0, -6.0);
  CHECK(r6[0].real);
  CHECK(r6[0].valid);
  CHECK(r6[0].rho0 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(r6[0].gamma) < 1e-14);
  CHECK(r6[0].residual < 1e-12);
  CHECK_FALSE(r6[1].real);
  CHECK_FALSE(r6[2].real);
  CHECK_FALSE(r6[1].valid);

  auto rk = cubic_rho_roots(0.5, -1.5);
  CHECK(rk[0].rho0 == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(std::abs(rk[0].gamma) < 1e-13);

  auto r1 = cubic_rho_roots(1.0, -1.0);
  CHECK(r1[0].valid);
  CHECK(r1[0].rho0 == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(r1[0].gamma == doctest::Approx(-0.375).epsilon(1e-13));

  auto rp = cubic_rho_roots(1.0, 3.0);
  CHECK(rp[0].valid);
  CHECK(rp[0].rho0 == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(rp[0].gamma == doctest::Approx(-0.375).epsilon(1e-13));
  CHECK_FALSE(rp[1].valid);
  CHECK_FALSE(rp[2].valid);
}

TEST_CASE("root census: coincident pair at the threshold") {
  auto r = cubic_rho_roots(1.0, -81.0);
  // The repeated root is a double zero, so floating point limits its accuracy
  // to roughly sqrt(machine epsilon); the simple root stays fully sharp.
  CHECK(r[0].rho0 == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(r[0].gamma == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(r[1].rho0 == doctest::Approx(-1.0 / 18.0).epsilon(2e-6));
  CHECK(r[1].gamma == doctest::Approx(2.5 / 36.0).epsilon(2e-6));
  CHECK(r[2].rho0 == doctest::Approx(-1.0 / 18.0).epsilon(2e-6));
  for (int i = 0; i < 3; ++i) {
    CHECK(r[i].real);
    CHECK(r[i].valid);
    CHECK(r[i].residual < 1e-12);
  }
  CHECK_FALSE(r[0].coincident);
  CHECK(r[1].coincident);
  CHECK(r[2].coincident);
  CHECK(r[0].sign == +1);
  CHECK(r[1].sign == -1);
  CHECK(r[2].sign == -1);
}

TEST_CASE("root census: three distinct roots below the threshold") {
  auto r = cubic_rho_roots(1.0, -100.0);
  CHECK(r[0].rho0 == doctest::Approx(0.0988719871741111099).epsilon(1e-13));
  CHECK(r[0].gamma == doctest::Approx(0.113491837208904309).epsilon(1e-13));
  CHECK(r[1].rho0 == doctest::Approx(-0.036464963782841622).epsilon(1e-13));
  CHECK(r[1].gamma == doctest::Approx(0.040394041619486664).epsilon(1e-13));
  CHECK(r[2].rho0 == doctest::Approx(-0.0624070233912694878).epsilon(1e-13));
  CHECK(r[2].gamma == doctest::Approx(0.0961141211716090274).epsilon(1e-13));
  for (int i = 0; i < 3; ++i) {
    CHECK(r[i].valid);
    CHECK_FALSE(r[i].coincident);
    CHECK(r[i].residual < 1e-12);
  }
  // Slightly above the threshold the companion roots leave the real line.
  auto r50 = cubic_rho_roots(1.0, -50.0);
  CHECK(r50[0].valid);
  CHECK_FALSE(r50[1].real);
  CHECK_FALSE(r50[2].real);
}

TEST_CASE("slope resolvent: anchor rates at (1,1)") {
  QkRates r = qk_timelike_rhs(1.0, 1.0, 1.0, -6.0, 1);
  CHECK(r.b_rate == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(r.a_rate == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(r.beta == doctest::Approx(2.0).epsilon(1e-12));

  r = qk_timelike_rhs(1.0, 1.0, 1.0, -1.0, 1);
  CHECK(std::abs(r.b_rate) < 1e-12);
  CHECK(r.a_rate == doctest::Approx(-4.0 / 3.0).epsilon(1e-12));

  r = qk_timelike_rhs(1.0, 1.0, 1.0, 3.0, 1);
  CHECK(r.b_rate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.a_rate == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(r.beta == doctest::Approx(-1.0).epsilon(1e-12));

  r = qk_timelike_rhs(1.0, 1.0, 1.0, -81.0, 1);
  CHECK(r.b_rate == doctest::Approx(-5.0).epsilon(1e-12));
  CHECK(r.a_rate == doctest::Approx(-5.5).epsilon(1e-12));
  for (int l : {2, 3}) {
    r = qk_timelike_rhs(1.0, 1.0, 1.0, -81.0, l);
    CHECK(r.b_rate == doctest::Approx(4.0).epsilon(1e-11));
    CHECK(r.a_rate == doctest::Approx(8.0).epsilon(1e-11));
  }
}

TEST_CASE("slope resolvent: three-branch point and generic-state pins") {
  QkRates r = qk_timelike_rhs(1.0, 1.0, 1.0, -100.0, 1);
  CHECK(r.a_rate == doctest::Approx(-6.05704410612798181).epsilon(1e-13));
  CHECK(r.b_rate == doctest::Approx(-5.59146581160740733).epsilon(1e-13));
  r = qk_timelike_rhs(1.0, 1.0, 1.0, -100.0, 2);
  CHECK(r.a_rate == doctest::Approx(12.7117920362578863).epsilon(1e-13));
  CHECK(r.b_rate == doctest::Approx(3.4309975855227748).epsilon(1e-13));
  r = qk_timelike_rhs(1.0, 1.0, 1.0, -100.0, 3);
  CHECK(r.a_rate == doctest::Approx(7.01191873653676221).epsilon(1e-13));
  CHECK(r.b_rate == doctest::Approx(5.16046822608463252).epsilon(1e-13));

  r = qk_timelike_rhs(1.3, 0.8, 0.7, -5.0, 1);
  CHECK(r.a_rate == doctest::Approx(-1.84452157961449574).epsilon(1e-13));
  CHECK(r.b_rate == doctest::Approx(-0.96548674649159768).epsilon(1e-13));
  CHECK(r.beta == doctest::Approx(1.61353277043907698).epsilon(1e-13));
}

TEST_CASE("slope resolvent: invalid branches throw") {
  CHECK_THROWS_AS(qk_timelike_slope(1.0, 1.0, 1.0, -50.0, 2), InvalidBranchError);
  CHECK_THROWS_AS(qk_timelike_slope(1.0, 1.0, 1.0, -50.0, 3), InvalidBranchError);
  CHECK_THROWS_AS(qk_timelike_slope(1.0, 1.0, 1.0, 3.0, 2), InvalidBranchError);
  CHECK_THROWS_AS(qk_timelike_slope(1.0, 1.0, 1.0, 3.0, 4), InvalidBranchError);
  CHECK_THROWS_AS(qk_timelike_slope(-1.0, 1.0, 1.0, -6.0, 1), DomainError);
}

TEST_CASE("spacelike rates mirror the timelike system") {
  QkRates r = qk_spacelike_rhs(1.0, 1.0, 1.0, 6.0, 1);
  CHECK(r.a_rate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.b_rate == doctest::Approx(1.0).epsilon(1e-12));

  r = qk_spacelike_rhs(1.0, 1.0, 1.0, -3.0, 1);
  CHECK(r.a_rate == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.b_rate == doctest::Approx(-2.0).epsilon(1e-12));

  r = qk_spacelike_rhs(1.0, 1.0, 1.0, 100.0, 2);
  CHECK(r.a_rate == doctest::Approx(-12.7117920362578863).epsilon(1e-13));
  CHECK(r.b_rate == doctest::Approx(-3.4309975855227748).epsilon(1e-13));
}

TEST_CASE("profile functions: seed normalization and pinned samples") {
  OneLoopProfile pr = one_loop_profile(1.0, -1.0, 1);
  CHECK(pr.rho0 == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(pr.gamma == doctest::Approx(-0.375).epsilon(1e-13));
  CHECK(pr.s == +1);
  CHECK(pr.d == -1);
  CHECK_FALSE(pr.positive_type);
  CHECK(profile_A<double>(pr, pr.rho0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(profile_B<double>(pr, pr.rho0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(profile_A<double>(pr, 2.0) == doctest::Approx(1.43222974807886576).epsilon(1e-14));
  CHECK(profile_B<double>(pr, 2.0) == doctest::Approx(1.0327955589886445).epsilon(1e-14));
  CHECK(profile_rate<double>(pr, 2.0) == doctest::Approx(1.86189867250252549).epsilon(1e-14));

  OneLoopProfile pp = one_loop_profile(1.0, 3.0, 1);
  CHECK(pp.positive_type);
  CHECK(pp.d == +1);
  CHECK(profile_A<double>(pp, pp.rho0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(profile_B<double>(pp, pp.rho0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(profile_A<double>(pp, 0.6) == doctest::Approx(0.692820323027550917).epsilon(1e-14));
  CHECK(profile_B<double>(pp, 0.6) == doctest::Approx(1.54919333848296675).epsilon(1e-14));

  OneLoopProfile p2 = one_loop_profile(1.0, -100.0, 2);
  CHECK(p2.s == -1);
  CHECK(profile_A<double>(p2, p2.rho0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(profile_B<double>(p2, p2.rho0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(profile_rate<double>(p2, p2.rho0) ==
        doctest::Approx(0.0886462389122634118).epsilon(1e-13));
}

TEST_CASE("profile domains and flow-time spans") {
  OneLoopProfile pr = one_loop_profile(1.0, -1.0, 1);
  CHECK(pr.rho_lo == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(std::isinf(pr.rho_hi));
  CHECK(pr.sigma_lo == doctest::Approx(-0.526605941407871289).epsilon(1e-11));
  CHECK(std::isinf(pr.sigma_hi));

  OneLoopProfile pp = one_loop_profile(1.0, 3.0, 1);
  CHECK(pp.rho_lo == doctest::Approx(0.375).epsilon(1e-13));
  CHECK(pp.rho_hi == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(pp.sigma_lo == doctest::Approx(-0.700376575427793422).epsilon(1e-11));
  CHECK(pp.sigma_hi == doctest::Approx(0.219774609082816693).epsilon(1e-11));

  OneLoopProfile p2 = one_loop_profile(1.0, -100.0, 2);
  CHECK(p2.rho_lo == doctest::Approx(-0.040394041619486664).epsilon(1e-12));
  CHECK(p2.rho_hi == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(p2.sigma_lo == doctest::Approx(-0.0803242942270082165).epsilon(1e-10));
  CHECK(std::isinf(p2.sigma_hi));

  // gamma snaps to zero exactly at eps*lambda = -6 k^2.
  OneLoopProfile ps = one_loop_profile(1.0, -6.0, 1);
  CHECK(ps.gamma == 0.0);
  CHECK(ps.rho_lo == 0.0);
  CHECK(std::isinf(ps.sigma_lo));
  CHECK(std::isinf(ps.sigma_hi));
}

TEST_CASE("flow inversion round-trips and matches the reference integral") {
  RhoPath path(one_loop_profile(1.0, -1.0, 1));
  CHECK(path.rho_of_sigma(0.0) == doctest::Approx(1.5).epsilon(1e-14));
  const double sigma2 = path.sigma_of_rho(2.0);
  CHECK(sigma2 == doctest::Approx(0.299271679436509416).epsilon(1e-12));
  CHECK(path.rho_of_sigma(sigma2) == doctest::Approx(2.0).epsilon(1e-11));
  for (double rho : {0.8, 1.1, 1.5, 2.5, 6.0}) {
    const double s = path.sigma_of_rho(rho);
    CHECK(path.rho_of_sigma(s) == doctest::Approx(rho).epsilon(1e-10));
  }
  CHECK_THROWS_AS(path.rho_of_sigma(-0.6), DomainError);
  CHECK_THROWS_AS(path.sigma_of_rho(0.5), DomainError);
}

TEST_CASE("flow Taylor series matches offset evaluations") {
  RhoPath path(one_loop_profile(1.0, -1.0, 1));
  for (double sigma : {-0.3, 0.0, 0.4}) {
    const Taylor4 s = path.rho_series(sigma);
    CHECK(s.c[0] == doctest::Approx(path.rho_of_sigma(sigma)).epsilon(1e-12));
    CHECK(s.c[1] == doctest::Approx(profile_rate<double>(path.profile(), s.c[0])).epsilon(1e-11));
    for (double h : {0.01, -0.01}) {
      const double exact = path.rho_of_sigma(sigma + h);
      const double approx = s.c[0] + s.c[1] * h + s.c[2] * h * h + s.c[3] * h * h * h;
      CHECK(std::abs(exact - approx) < 1e-7);
    }
  }
}

TEST_CASE("assembled one-loop entries hit the slope field at the anchor") {
  struct Case {
    Family family;
    int eps;
    double lambda;
    int branch;
    double want_ap, want_bp;
  };
  // Anchor derivatives are the slope-field rates at (a,b) = (1,1).
  const Case cases[] = {
      {Family::NegativeTimelike, +1, -1.0, 1, -4.0 / 3.0, 0.0},
      {Family::NegativeTimelike, -1, 100.0, 2, 12.7117920362578863, 3.4309975855227748},
      {Family::NegativeTimelike, -1, 100.0, 3, 7.01191873653676221, 5.16046822608463252},
      {Family::PositiveTimelike, +1, 3.0, 1, -2.0, 2.0},
      {Family::NegativeSpacelike, -1, -3.0, 1, 2.0, -2.0},
      {Family::PositiveSpacelike, -1, 100.0, 2, -12.7117920362578863, -3.4309975855227748},
      {Family::PositiveSpacelike, -1, 6.0, 1, 2.0, 1.0},
  };
  for (const Case& c : cases) {
    CAPTURE(static_cast<int>(c.family));
    CAPTURE(c.lambda);
    CAPTURE(c.branch);
    SolutionSpec spec;
    spec.family = c.family;
    spec.eps = c.eps;
    spec.lambda = c.lambda;
    spec.branch = c.branch;
    spec.t0 = 0.25;
    Solution sol = make_solution(spec);
    CHECK(sol.evolution.a(spec.t0) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(sol.evolution.b(spec.t0) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(sol.evolution.a.deriv(spec.t0) == doctest::Approx(c.want_ap).epsilon(1e-9));
    CHECK(sol.evolution.b.deriv(spec.t0) ==
          doctest::Approx(c.want_bp).epsilon(1e-9).scale(std::max(1.0, std::abs(c.want_bp))));
  }
}

TEST_CASE("negative-timelike at eps*lambda = -6k^2 reproduces the stationary flow") {
  SolutionSpec spec;
  spec.family = Family::NegativeTimelike;
  spec.eps = +1;
  spec.lambda = -6.0;
  Solution sol = make_solution(spec);
  for (double t : {-0.7, 0.4, 1.1}) {
    CHECK(sol.evolution.a(t) == doctest::Approx(std::exp(-2.0 * t)).epsilon(1e-10));
    CHECK(sol.evolution.b(t) == doctest::Approx(std::exp(-t)).epsilon(1e-10));
  }
}

TEST_CASE("one-loop time domains follow the flow span") {
  SolutionSpec spec;
  spec.family = Family::NegativeTimelike;
  spec.eps = +1;
  spec.lambda = -1.0;
  Solution sol = make_solution(spec);
  // d = -1: the forward-time wall is at t0 - sigma_lo.
  CHECK(sol.evolution.t_max == doctest::Approx(0.526605941407871289).epsilon(1e-10));
  CHECK(std::isinf(sol.evolution.t_min));
  CHECK_THROWS_AS(sol.metric.components(pt(0.53, 0, 0, 0)), DomainError);

  SolutionSpec mirror;
  mirror.family = Family::PositiveSpacelike;
  mirror.lambda = 1.0;
  Solution msol = make_solution(mirror);
  // d = +1 mirror: the backward-time wall is at t0 + sigma_lo.
  CHECK(msol.evolution.t_min == doctest::Approx(-0.526605941407871289).epsilon(1e-10));
  CHECK(std::isinf(msol.evolution.t_max));
}

TEST_CASE("spec validation and normalization") {
  SolutionSpec spec;
  spec.family = Family::NegativeTimelike;
  spec.k = -1.0;
  CHECK_THROWS_AS(make_solution(spec), DomainError);
  spec.k = 1.0;
  spec.eps = +1;
  spec.lambda = 2.0;  // eps*lambda > 0 is the wrong regime
  CHECK_THROWS_AS(make_solution(spec), DomainError);
  spec.lambda = -50.0;
  spec.branch = 2;
  CHECK_THROWS_AS(make_solution(spec), InvalidBranchError);
  spec.branch = 5;
  CHECK_THROWS_AS(make_solution(spec), InvalidBranchError);

  SolutionSpec forced;
  forced.family = Family::StationarySpacelike;
  forced.eps = +1;  // forced to -1 by the family
  Solution sol = make_solution(forced);
  CHECK(sol.spec.eps == -1);
  CHECK(sol.lambda == doctest::Approx(6.0));
  CHECK(sol.spec.lambda == doctest::Approx(6.0));

  SolutionSpec hk;
  hk.family = Family::HyperKahlerTimelike;
  hk.lambda = 4.0;  // ignored: the family is Ricci-flat
  Solution hks = make_solution(hk);
  CHECK(hks.lambda == 0.0);
}

TEST_CASE("stationary metrics are Einstein with the pinned constant") {
  for (int eps : {+1, -1}) {
    SolutionSpec spec;
    spec.family = Family::StationaryTimelike;
    spec.eps = eps;
    spec.k = 1.0;
    Solution sol = make_solution(spec);
    CHECK(sol.lambda == doctest::Approx(-6.0 * eps));
    for (double t : {0.0, 0.6}) {
      const auto c = curvature_at(sol.metric.field(), pt(t, 0.3, -0.2, 0.1));
      CHECK(einstein_residual(c, sol.lambda) < 1e-9);
      CHECK(c.scal / 4.0 == doctest::Approx(sol.lambda).epsilon(1e-9));
      const auto g = sol.metric.components(pt(t, 0.3, -0.2, 0.1));
      CHECK(g[3][3] == doctest::Approx(eps / std::pow(sol.evolution.a(t), 2)).epsilon(1e-12));
    }
  }
  SolutionSpec sp;
  sp.family = Family::StationarySpacelike;
  Solution sps = make_solution(sp);
  const auto c = curvature_at(sps.metric.field(), pt(0.4, 0.2, -0.5, 0.3));
  CHECK(einstein_residual(c, 6.0) < 1e-9);
  const auto g = sps.metric.components(pt(0.4, 0.2, -0.5, 0.3));
  CHECK(g[3][3] == doctest::Approx(1.0 / std::pow(sps.evolution.a(0.4), 2)).epsilon(1e-12));
}

TEST_CASE("one-loop metrics are Einstein in both charts") {
  struct Case {
    Family family;
    int eps;
    double lambda;
    int branch;
  };
  const Case cases[] = {
      {Family::NegativeTimelike, +1, -1.0, 1},
      {Family::NegativeTimelike, -1, 100.0, 2},
      {Family::PositiveTimelike, +1, 3.0, 1},
      {Family::NegativeSpacelike, -1, -3.0, 1},
      {Family::PositiveSpacelike, -1, 100.0, 3},
  };
  for (const Case& cs : cases) {
    CAPTURE(static_cast<int>(cs.family));
    SolutionSpec spec;
    spec.family = cs.family;
    spec.eps = cs.eps;
    spec.lambda = cs.lambda;
    spec.branch = cs.branch;
    Solution sol = make_solution(spec);
    REQUIRE(sol.has_rho_chart);

    const double rmid = 0.5 * (sol.rho_sample_lo + sol.rho_sample_hi);
    for (double rho : {sol.rho_sample_lo, rmid, sol.rho_sample_hi}) {
      const auto c = curvature_at(sol.rho_metric.field(), pt(rho, 0.15, -0.35, 0.2));
      CHECK(einstein_residual(c, sol.lambda) < 1e-9);
    }
    const double tmid = 0.5 * (sol.t_sample_lo + sol.t_sample_hi);
    for (double t : {sol.t_sample_lo, tmid, sol.t_sample_hi}) {
      const auto c = curvature_at(sol.metric.field(), pt(t, -0.2, 0.3, 0.45));
      CHECK(einstein_residual(c, sol.lambda) < 1e-8);
    }
  }
}

TEST_CASE("self-dual Weyl eigenvalues follow the closed form") {
  // Timelike pattern nu = 16 k^3 b^7 / (eps a^3 (-3 k b^3 + a b')), spectrum
  // {-2 nu, nu, nu} in the self-dual block; anti-self-dual block vanishes.
  SolutionSpec spec;
  spec.family = Family::StationaryTimelike;
  Solution sol = make_solution(spec);
  auto c = curvature_at(sol.metric.field(), pt(0.0, 0.1, 0.2, -0.3));
  OrientationChoice ori = select_orientation(c);
  CHECK(ori.residual < 1e-9);
  WeylSpectrum ws = weyl_spectrum(c, ori.ori);
  CHECK(ws.block_residual < 1e-8);
  // nu = -4 k^2 at the anchor state.
  CHECK(ws.sd[0] == doctest::Approx(-4.0).epsilon(1e-8));
  CHECK(ws.sd[1] == doctest::Approx(-4.0).epsilon(1e-8));
  CHECK(ws.sd[2] == doctest::Approx(8.0).epsilon(1e-8));

  SolutionSpec gen;
  gen.family = Family::NegativeTimelike;
  gen.eps = +1;
  gen.lambda = -1.0;
  Solution gsol = make_solution(gen);
  const double t = 0.15;
  const double a = gsol.evolution.a(t);
  const double b = gsol.evolution.b(t);
  const double bp = gsol.evolution.b.deriv(t);
  const double nu =
      16.0 * std::pow(b, 7) / (gen.eps * (a * a) * (-3.0 * std::pow(b, 3) + a * bp));
  auto gc = curvature_at(gsol.metric.field(), pt(t, -0.4, 0.1, 0.3));
  OrientationChoice gori = select_orientation(gc);
  CHECK(gori.residual < 1e-7);
  WeylSpectrum gws = weyl_spectrum(gc, gori.ori);
  std::array<double, 3> want{nu, nu, -2.0 * nu};
  std::sort(want.begin(), want.end());
  for (int i = 0; i < 3; ++i)
    CHECK(gws.sd[i] == doctest::Approx(want[i]).epsilon(2e-7).scale(std::abs(nu)));

  // Spacelike pattern: the time reflection that maps these onto the eps = -1
  // flow sends b' to -b', giving nu' = 16 k^3 b^7 / (a^2 (3 k b^3 + a b'))
  // with spectrum {nu', nu', -2 nu'}.
  SolutionSpec sp;
  sp.family = Family::NegativeSpacelike;
  sp.lambda = -3.0;
  Solution ssol = make_solution(sp);
  const double ts = -0.1;
  const double sa = ssol.evolution.a(ts);
  const double sb = ssol.evolution.b(ts);
  const double sbp = ssol.evolution.b.deriv(ts);
  const double nup =
      16.0 * std::pow(sb, 7) / ((sa * sa) * (3.0 * std::pow(sb, 3) + sa * sbp));
  auto sc = curvature_at(ssol.metric.field(), pt(ts, 0.2, 0.25, -0.15));
  OrientationChoice sori = select_orientation(sc);
  CHECK(sori.residual < 1e-7);
  WeylSpectrum sws = weyl_spectrum(sc, sori.ori);
  std::array<double, 3> swant{nup, nup, -2.0 * nup};
  std::sort(swant.begin(), swant.end());
  for (int i = 0; i < 3; ++i)
    CHECK(sws.sd[i] == doctest::Approx(swant[i]).epsilon(2e-7).scale(std::abs(nup)));

  SolutionSpec pp;
  pp.family = Family::PositiveSpacelike;
  pp.lambda = 6.0;
  Solution psol = make_solution(pp);
  const double tp = 0.12;
  const double pa = psol.evolution.a(tp);
  const double pb = psol.evolution.b(tp);
  const double pbp = psol.evolution.b.deriv(tp);
  const double pnu =
      16.0 * std::pow(pb, 7) / ((pa * pa) * (3.0 * std::pow(pb, 3) + pa * pbp));
  auto pc = curvature_at(psol.metric.field(), pt(tp, -0.3, 0.05, 0.2));
  OrientationChoice pori = select_orientation(pc);
  CHECK(pori.residual < 1e-7);
  WeylSpectrum pws = weyl_spectrum(pc, pori.ori);
  std::array<double, 3> pwant{pnu, pnu, -2.0 * pnu};
  std::sort(pwant.begin(), pwant.end());
  for (int i = 0; i < 3; ++i)
    CHECK(pws.sd[i] == doctest::Approx(pwant[i]).epsilon(2e-7).scale(std::abs(pnu)));
}

TEST_CASE("lightlike families satisfy the lightlike evolution equations") {
  SolutionSpec qpk;
  qpk.family = Family::LightlikePositive;
  qpk.lambda = 3.0;
  Solution qsol = make_solution(qpk);
  CHECK(qsol.spec.eps == -1);
  for (double t : {-0.4, 0.0, 0.37}) CHECK(lightlike_residual(qsol.evolution, 3.0, t) < 1e-10);
  auto qc = curvature_at(qsol.metric.field(), pt(0.37, 0.3, -0.1, 0.25));
  CHECK(einstein_residual(qc, 3.0) < 1e-9);

  SolutionSpec lor;
  lor.family = Family::LightlikeLorentzian;
  lor.lambda = -3.0;
  Solution lsol = make_solution(lor);
  CHECK(lsol.spec.eps == +1);
  for (double t : {-0.2, 0.5}) CHECK(lightlike_residual(lsol.evolution, -3.0, t) < 1e-10);
  auto lc = curvature_at(lsol.metric.field(), pt(0.5, -0.3, 0.2, 0.1));
  CHECK(einstein_residual(lc, -3.0) < 1e-9);

  SolutionSpec flat;
  flat.family = Family::HyperKahlerLightlike;
  Solution fsol = make_solution(flat);
  for (double t : {-1.0, 0.8}) CHECK(lightlike_residual(fsol.evolution, 0.0, t) < 1e-12);
}

TEST_CASE("lightlike first-order system integrates onto the closed form") {
  const double lambda = 3.0;
  const double mu = -lambda;  // eps = -1
  const double alpha = std::sqrt(lambda / 3.0);
  OdeRhs rhs = [mu](double, const std::vector<double>& y, std::vector<double>& dy) {
    std::array<double, 7> s;
    for (int i = 0; i < 7; ++i) s[i] = y[i];
    const auto d = lightlike_rhs(s, mu);
    for (int i = 0; i < 7; ++i) dy[i] = d[i];
  };
  OdeSolution sol = integrate(rhs, {1.0, 1.0, 0.0, 0.0, 2.0 * alpha, 0.0, 0.0}, 0.0, 0.5);
  REQUIRE(sol.stop() == OdeStop::ReachedEnd);
  CHECK(std::abs(sol.y_back()[0] - std::exp(alpha * 0.5)) < 1e-8);
  CHECK(std::abs(sol.y_back()[1] - std::exp(2.0 * alpha * 0.5)) < 1e-8);
  CHECK(std::abs(sol.y_back()[2]) < 1e-9);
  CHECK(std::abs(sol.y_back()[3]) < 1e-9);

  std::array<double, 7> singular{1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(lightlike_rhs(singular, mu), SingularSlopeError);
}

TEST_CASE("cube-root families satisfy their first-order system and are Ricci-flat") {
  SolutionSpec spec;
  spec.family = Family::HyperKahlerTimelike;
  spec.k = 1.0;
  Solution sol = make_solution(spec);
  CHECK(sol.evolution.t_min == doctest::Approx(-1.0 / 3.0));
  for (double t : {-0.25, 0.0, 1.2}) {
    const double a = sol.evolution.a(t);
    const double b = sol.evolution.b(t);
    const double cc = sol.evolution.c(t);
    CHECK(sol.evolution.a.deriv(t) == doctest::Approx(spec.k * b * cc).epsilon(1e-11));
    CHECK(sol.evolution.b.deriv(t) ==
          doctest::Approx(-spec.k * b * b * cc / a).epsilon(1e-11));
    const auto c = curvature_at(sol.metric.field(), pt(t, 0.3, -0.2, 0.15));
    CHECK(max_abs_mat(c.ricci) < 1e-10);
    CHECK(c.kretschmann > 1e-4);  // curved, not flat
  }
  CHECK_THROWS_AS(sol.metric.components(pt(-0.34, 0, 0, 0)), DomainError);

  SolutionSpec sp;
  sp.family = Family::HyperKahlerSpacelike;
  Solution ssol = make_solution(sp);
  CHECK(ssol.evolution.t_max == doctest::Approx(1.0 / 3.0));
  const auto sc = curvature_at(ssol.metric.field(), pt(0.2, 0.1, 0.4, -0.3));
  CHECK(max_abs_mat(sc.ricci) < 1e-10);

  SolutionSpec fl;
  fl.family = Family::HyperKahlerLightlike;
  Solution fsol = make_solution(fl);
  for (double t : {-0.8, 0.6}) {
    const auto fc = curvature_at(fsol.metric.field(), pt(t, 0.2, -0.4, 0.3));
    CHECK(max_abs_ten(fc.riemann) < 1e-10);
  }
}

TEST_CASE("family names round-trip") {
  for (Family f : all_families()) {
    Family back;
    REQUIRE(family_from_name(family_name(f), &back));
    CHECK(back == f);
  }
  Family dummy;
  CHECK_FALSE(family_from_name("no-such-family", &dummy));
}
