#pragma once

#include "heis4/metric.hpp"

namespace heis4 {

// Pointwise curvature of a metric field, computed from nested forward-mode
// jets: two derivative layers on top of the scalar S. S = double covers the
// algebraic checks; S = J1 exposes one further derivative (covariant
// derivative of curvature, derivatives of Weyl invariants).
template <class S>
struct CurvatureData {
  Vec4<S> point;
  Mat4<S> g;
  Mat4<S> ginv;
  S detg;
  Ten3<S> gamma;    // gamma[l][m][n] = Gamma^l_{mn}
  Ten4<S> riemann;  // R_{abcd}, lowered
  Mat4<S> ricci;
  S scal;
  Ten4<S> weyl;  // W_{abcd}, lowered
  S kretschmann;
};

template <class S>
CurvatureData<S> curvature_at(const MetricField& gf, const Vec4<S>& p) {
  const auto p2 = seed_point(seed_point(p));
  const auto big = gf.components(p2);

  CurvatureData<S> out;
  out.point = p;
  Ten3<S> dg;    // dg[m][a][b] = d_m g_{ab}
  Ten4<S> ddg;   // ddg[m][n][a][b]
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      out.g[a][b] = big[a][b].v.v;
      for (int m = 0; m < 4; ++m) {
        dg[m][a][b] = big[a][b].d[m].v;
        for (int n = 0; n < 4; ++n) ddg[m][n][a][b] = big[a][b].d[m].d[n];
      }
    }
  out.ginv = mat4_inverse(out.g, &out.detg);

  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) {
        S s(0.0);
        for (int k = 0; k < 4; ++k)
          s = s + out.ginv[l][k] * (dg[m][k][n] + dg[n][k][m] - dg[k][m][n]);
        out.gamma[l][m][n] = s * 0.5;
      }

  // d_k g^{ls} = -g^{la} (d_k g_{ab}) g^{bs}
  Ten3<S> dginv;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      for (int s = 0; s < 4; ++s) {
        S acc(0.0);
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) acc = acc + out.ginv[l][a] * dg[k][a][b] * out.ginv[b][s];
        dginv[k][l][s] = S(0.0) - acc;
      }

  Ten4<S> dgamma;  // dgamma[k][l][m][n] = d_k Gamma^l_{mn}
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          S s1(0.0), s2(0.0);
          for (int q = 0; q < 4; ++q) {
            s1 = s1 + dginv[k][l][q] * (dg[m][q][n] + dg[n][q][m] - dg[q][m][n]);
            s2 = s2 + out.ginv[l][q] * (ddg[k][m][q][n] + ddg[k][n][q][m] - ddg[k][q][m][n]);
          }
          dgamma[k][l][m][n] = (s1 + s2) * 0.5;
        }

  // R^l_{smn} = d_m Gamma^l_{ns} - d_n Gamma^l_{ms}
  //             + Gamma^l_{ma} Gamma^a_{ns} - Gamma^l_{na} Gamma^a_{ms}
  Ten4<S> riem_up;
  for (int l = 0; l < 4; ++l)
    for (int s = 0; s < 4; ++s)
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          S acc = dgamma[m][l][n][s] - dgamma[n][l][m][s];
          for (int a = 0; a < 4; ++a)
            acc = acc + out.gamma[l][m][a] * out.gamma[a][n][s] -
                  out.gamma[l][n][a] * out.gamma[a][m][s];
          riem_up[l][s][m][n] = acc;
        }

  // Lowered curvature uses the sign package R(X,Y) = nabla_{[X,Y]} - [nabla_X,
  // nabla_Y]: round spheres get negative R_{abab} while Ricci stays positive
  // (Ric_{bd} = g^{ac} R_{abdc} in this package).
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
          S acc(0.0);
          for (int l = 0; l < 4; ++l) acc = acc - out.g[a][l] * riem_up[l][b][m][n];
          out.riemann[a][b][m][n] = acc;
        }

  for (int s = 0; s < 4; ++s)
    for (int n = 0; n < 4; ++n) {
      S acc(0.0);
      for (int m = 0; m < 4; ++m) acc = acc + riem_up[m][s][m][n];
      out.ricci[s][n] = acc;
    }
  {
    S acc(0.0);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) acc = acc + out.ginv[a][b] * out.ricci[a][b];
    out.scal = acc;
  }

  // W = R + (g ^ Ric)/2 - scal (g ^ g)/12 in dimension four (the correction
  // terms carry the same sign package as the lowered curvature above).
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          S w = out.riemann[a][b][c][d];
          w = w + 0.5 * (out.g[a][c] * out.ricci[b][d] - out.g[a][d] * out.ricci[b][c] +
                         out.g[b][d] * out.ricci[a][c] - out.g[b][c] * out.ricci[a][d]);
          w = w - (out.scal / 6.0) * (out.g[a][c] * out.g[b][d] - out.g[a][d] * out.g[b][c]);
          out.weyl[a][b][c][d] = w;
        }

  // Kretschmann: raise indices one slot at a time.
  Ten4<S> t = out.riemann;
  for (int slot = 0; slot < 4; ++slot) {
    Ten4<S> r;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            S acc(0.0);
            for (int e = 0; e < 4; ++e) {
              const S& src = (slot == 0)   ? t[e][b][c][d]
                             : (slot == 1) ? t[a][e][c][d]
                             : (slot == 2) ? t[a][b][e][d]
                                           : t[a][b][c][e];
              const int idx = (slot == 0) ? a : (slot == 1) ? b : (slot == 2) ? c : d;
              acc = acc + out.ginv[idx][e] * src;
            }
            r[a][b][c][d] = acc;
          }
    t = r;
  }
  {
    S acc(0.0);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) acc = acc + out.riemann[a][b][c][d] * t[a][b][c][d];
    out.kretschmann = acc;
  }
  return out;
}

inline double max_abs_mat(const Mat4<double>& m) {
  double r = 0.0;
  for (const auto& row : m)
    for (double v : row) r = std::max(r, std::abs(v));
  return r;
}
inline double max_abs_ten(const Ten4<double>& t) {
  double r = 0.0;
  for (const auto& a : t)
    for (const auto& b : a)
      for (const auto& row : b)
        for (double v : row) r = std::max(r, std::abs(v));
  return r;
}

// max |Ric - lambda g|
inline double einstein_residual(const CurvatureData<double>& c, double lambda) {
  double r = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) r = std::max(r, std::abs(c.ricci[a][b] - lambda * c.g[a][b]));
  return r;
}

inline double lambda_fit(const CurvatureData<double>& c) { return c.scal / 4.0; }

// nabla[e][a][b][c][d] = (nabla_e R)_{abcd}
struct CovariantRiemann {
  std::array<Ten4<double>, 4> nabla;
  double max_component = 0.0;
};

inline CovariantRiemann covariant_riemann(const MetricField& gf, const Vec4<double>& p) {
  const auto cj = curvature_at<J1>(gf, seed_point(p));
  Ten3<double> gamma;
  for (int l = 0; l < 4; ++l)
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) gamma[l][m][n] = cj.gamma[l][m][n].v;
  CovariantRiemann out;
  for (int e = 0; e < 4; ++e)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            double acc = cj.riemann[a][b][c][d].d[e];
            for (int f = 0; f < 4; ++f) {
              acc -= gamma[f][e][a] * cj.riemann[f][b][c][d].v;
              acc -= gamma[f][e][b] * cj.riemann[a][f][c][d].v;
              acc -= gamma[f][e][c] * cj.riemann[a][b][f][d].v;
              acc -= gamma[f][e][d] * cj.riemann[a][b][c][f].v;
            }
            out.nabla[e][a][b][c][d] = acc;
            out.max_component = std::max(out.max_component, std::abs(acc));
          }
  return out;
}

}  // namespace heis4
