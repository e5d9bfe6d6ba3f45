#pragma once

#include <algorithm>
#include <array>

#include "heis4/cubic.hpp"
#include "heis4/curvature.hpp"

namespace heis4 {

// Unordered-pair basis for 2-forms.
inline constexpr std::array<std::array<int, 2>, 6> kPairIndex = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

using Mat6 = std::array<std::array<double, 6>, 6>;

inline int perm_sign4(int a, int b, int c, int d) {
  int p[4] = {a, b, c, d};
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) {
        std::swap(p[i], p[j]);
        sign = -sign;
      }
    }
  return sign;
}

// vol_{abcd} = ori * sqrt(|det g|) * [abcd]
inline Ten4<double> volume_form(const CurvatureData<double>& c, int ori) {
  const double s = ori * std::sqrt(std::abs(c.detg));
  Ten4<double> v;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int x = 0; x < 4; ++x)
        for (int d = 0; d < 4; ++d) v[a][b][x][d] = s * perm_sign4(a, b, x, d);
  return v;
}

// Star on 2-forms in the pair basis: (star w)_{ab} = 1/2 vol_{ab}^{cd} w_{cd}.
// Squares to +1 in Riemannian and neutral signature, -1 in Lorentzian.
inline Mat6 star_operator(const CurvatureData<double>& c, int ori) {
  const auto vol = volume_form(c, ori);
  Mat6 m{};
  for (int P = 0; P < 6; ++P) {
    const int a = kPairIndex[P][0], b = kPairIndex[P][1];
    for (int Q = 0; Q < 6; ++Q) {
      const int x = kPairIndex[Q][0], d = kPairIndex[Q][1];
      double acc = 0.0;
      for (int e = 0; e < 4; ++e)
        for (int f = 0; f < 4; ++f) acc += vol[a][b][e][f] * c.ginv[e][x] * c.ginv[f][d];
      m[P][Q] = acc;
    }
  }
  return m;
}

// Weyl endomorphism with the full double contraction (W w)_{ab} = W_{abcd} w^{cd};
// on the stationary catalog member (k = 1) this normalization pins the
// self-dual eigenvalues at (8, -4, -4).
inline Mat6 weyl_endomorphism(const CurvatureData<double>& c) {
  Mat6 m{};
  for (int P = 0; P < 6; ++P) {
    const int a = kPairIndex[P][0], b = kPairIndex[P][1];
    for (int Q = 0; Q < 6; ++Q) {
      const int x = kPairIndex[Q][0], d = kPairIndex[Q][1];
      double acc = 0.0;
      for (int e = 0; e < 4; ++e)
        for (int f = 0; f < 4; ++f) acc += c.weyl[a][b][e][f] * c.ginv[e][x] * c.ginv[f][d];
      m[P][Q] = 2.0 * acc;
    }
  }
  return m;
}

// curlyW_{abcd} = 1/2 vol_{ab}^{ef} W_{efcd} - W_{abcd}; vanishes iff W is
// self-dual for the chosen orientation. Scales like W under constant
// conformal rescaling, so the residual is comparable across the catalog.
inline Ten4<double> weyl_antiselfdual_part(const CurvatureData<double>& c, int ori) {
  const auto vol = volume_form(c, ori);
  Ten4<double> volup;  // vol_{ab}^{ef}
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int e = 0; e < 4; ++e)
        for (int f = 0; f < 4; ++f) {
          double acc = 0.0;
          for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) acc += vol[a][b][m][n] * c.ginv[m][e] * c.ginv[n][f];
          volup[a][b][e][f] = acc;
        }
  Ten4<double> out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int x = 0; x < 4; ++x)
        for (int d = 0; d < 4; ++d) {
          double acc = -c.weyl[a][b][x][d];
          for (int e = 0; e < 4; ++e)
            for (int f = 0; f < 4; ++f) acc += 0.5 * volup[a][b][e][f] * c.weyl[e][f][x][d];
          out[a][b][x][d] = acc;
        }
  return out;
}

// Full contraction W_{abcd} W^{abcd}, raising one slot at a time. Scales by
// the inverse square of a constant conformal factor, and its cube root gives
// the rescaling that turns a self-dual Einstein metric into a Kahler one.
template <class S>
S weyl_square(const CurvatureData<S>& c) {
  Ten4<S> t = c.weyl;
  for (int slot = 0; slot < 4; ++slot) {
    Ten4<S> r;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int x = 0; x < 4; ++x)
          for (int d = 0; d < 4; ++d) {
            S acc(0.0);
            for (int e = 0; e < 4; ++e) {
              const S& src = (slot == 0)   ? t[e][b][x][d]
                             : (slot == 1) ? t[a][e][x][d]
                             : (slot == 2) ? t[a][b][e][d]
                                           : t[a][b][x][e];
              const int idx = (slot == 0) ? a : (slot == 1) ? b : (slot == 2) ? x : d;
              acc = acc + c.ginv[idx][e] * src;
            }
            r[a][b][x][d] = acc;
          }
    t = r;
  }
  S acc(0.0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int x = 0; x < 4; ++x)
        for (int d = 0; d < 4; ++d) acc = acc + c.weyl[a][b][x][d] * t[a][b][x][d];
  return acc;
}

struct OrientationChoice {
  int ori;              // +1 or -1
  double residual;      // max |curlyW| for the chosen orientation
  double other_residual;
};

inline OrientationChoice select_orientation(const CurvatureData<double>& c) {
  const double rp = max_abs_ten(weyl_antiselfdual_part(c, +1));
  const double rm = max_abs_ten(weyl_antiselfdual_part(c, -1));
  if (rp <= rm) return {+1, rp, rm};
  return {-1, rm, rp};
}

struct WeylSpectrum {
  std::array<double, 3> sd;   // eigenvalues on self-dual 2-forms, ascending
  std::array<double, 3> asd;  // eigenvalues on anti-self-dual 2-forms
  double block_residual;      // max |W V - V A| over both invariant blocks
};

namespace detail {
// Basis of the eigenspace im(P) for projector P (rank 3), by modified
// Gram-Schmidt over its columns.
inline std::array<std::array<double, 6>, 3> projector_basis(const Mat6& p) {
  std::array<std::array<double, 6>, 3> basis{};
  int have = 0;
  for (int col = 0; col < 6 && have < 3; ++col) {
    std::array<double, 6> v{};
    for (int r = 0; r < 6; ++r) v[r] = p[r][col];
    for (int j = 0; j < have; ++j) {
      double dot = 0.0;
      for (int r = 0; r < 6; ++r) dot += v[r] * basis[j][r];
      for (int r = 0; r < 6; ++r) v[r] -= dot * basis[j][r];
    }
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm < 1e-8) continue;
    for (int r = 0; r < 6; ++r) v[r] /= nrm;
    basis[have++] = v;
  }
  if (have != 3) throw std::runtime_error("projector_basis: projector rank != 3");
  return basis;
}

struct BlockEigen {
  std::array<double, 3> eig;
  double residual;
};

inline BlockEigen block_eigenvalues(const Mat6& w, const Mat6& proj) {
  const auto basis = projector_basis(proj);
  // 6x3 column matrix V, restriction A = (V^T V)^{-1} V^T (W V).
  std::array<std::array<double, 3>, 6> wv{};
  for (int r = 0; r < 6; ++r)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int s = 0; s < 6; ++s) acc += w[r][s] * basis[j][s];
      wv[r][j] = acc;
    }
  Mat3<double> gram = mat3_zero<double>();
  std::array<std::array<double, 3>, 3> vtwv{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double gacc = 0.0, wacc = 0.0;
      for (int r = 0; r < 6; ++r) {
        gacc += basis[i][r] * basis[j][r];
        wacc += basis[i][r] * wv[r][j];
      }
      gram[i][j] = gacc;
      vtwv[i][j] = wacc;
    }
  const Mat3<double> ginv = mat3_inverse(gram);
  Mat3<double> a = mat3_zero<double>();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int l = 0; l < 3; ++l) acc += ginv[i][l] * vtwv[l][j];
      a[i][j] = acc;
    }
  // Residual of invariance: W V - V A.
  double res = 0.0;
  for (int r = 0; r < 6; ++r)
    for (int j = 0; j < 3; ++j) {
      double acc = wv[r][j];
      for (int l = 0; l < 3; ++l) acc -= basis[l][r] * a[l][j];
      res = std::max(res, std::abs(acc));
    }
  const double tr = a[0][0] + a[1][1] + a[2][2];
  double tr2 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) tr2 += a[i][j] * a[j][i];
  const double det = mat3_det(a);
  std::array<double, 3> roots{};
  const int n = real_cubic_roots(-tr, 0.5 * (tr * tr - tr2), -det, roots, 1e-6);
  BlockEigen out{};
  out.residual = res;
  if (n >= 3) {
    out.eig = roots;
  } else if (n > 0) {
    // Near-degenerate: pad with the closest found root.
    for (int i = 0; i < 3; ++i) out.eig[i] = roots[std::min(i, n - 1)];
  } else {
    throw std::runtime_error("block_eigenvalues: no real eigenvalues");
  }
  std::sort(out.eig.begin(), out.eig.end());
  return out;
}
}  // namespace detail

// Spectrum of the Weyl endomorphism restricted to the +/- eigenspaces of the
// star operator. Requires star^2 = +1 (Riemannian or neutral signature).
inline WeylSpectrum weyl_spectrum(const CurvatureData<double>& c, int ori) {
  const Mat6 star = star_operator(c, ori);
  const Mat6 w = weyl_endomorphism(c);
  Mat6 pplus{}, pminus{};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const double id = (i == j) ? 1.0 : 0.0;
      pplus[i][j] = 0.5 * (id + star[i][j]);
      pminus[i][j] = 0.5 * (id - star[i][j]);
    }
  const auto ep = detail::block_eigenvalues(w, pplus);
  const auto em = detail::block_eigenvalues(w, pminus);
  return {ep.eig, em.eig, std::max(ep.residual, em.residual)};
}

}  // namespace heis4
