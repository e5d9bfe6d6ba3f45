#pragma once

#include <array>

#include "heis4/linalg.hpp"

namespace heis4 {

// Chart convention: spacetime coordinates (t, x, y, z) = indices 0..3; the
// nilpotent group occupies the (x, y, z) slice.

// Plain group law (x, y, z slots).
std::array<double, 3> group_multiply(const std::array<double, 3>& p,
                                     const std::array<double, 3>& q);

// Central twist scaled by k. The invariant frames below are invariant under
// left translations of this realization; k = 1 recovers group_multiply.
std::array<double, 3> twisted_multiply(double k, const std::array<double, 3>& p,
                                       const std::array<double, 3>& q);

// Invariant vector fields in coordinate components (t-slot always 0):
//   w_1 = dz-dual direction, w_2 = d/dx + k y d/dz, w_3 = d/dy - k x d/dz.
template <class S>
std::array<Vec4<S>, 3> invariant_frame(double k, const Vec4<S>& p) {
  std::array<Vec4<S>, 3> w;
  w[0] = {S(0.0), S(0.0), S(0.0), S(1.0)};
  w[1] = {S(0.0), S(1.0), S(0.0), k * p[2]};
  w[2] = {S(0.0), S(0.0), S(1.0), S(0.0) - k * p[1]};
  return w;
}

// Dual coframe: w^1 = dz + k x dy - k y dx, w^2 = dx, w^3 = dy.
template <class S>
std::array<Vec4<S>, 3> invariant_coframe(double k, const Vec4<S>& p) {
  std::array<Vec4<S>, 3> w;
  w[0] = {S(0.0), S(0.0) - k * p[2], k * p[1], S(1.0)};
  w[1] = {S(0.0), S(1.0), S(0.0), S(0.0)};
  w[2] = {S(0.0), S(0.0), S(1.0), S(0.0)};
  return w;
}

// Which invariant direction carries the center, i.e. how the abstract frame
// labels (e_1, e_2, e_3) map onto (w_1, w_2, w_3).
enum class CenterLabeling { TimelikeOrRiemannian, Spacelike, Lightlike };

// Permutation perm[i] = j meaning e_{i+1} = w_{j+1}.
std::array<int, 3> labeling_permutation(CenterLabeling labeling);

// c[k][i][j] with [e_i, e_j] = sum_k c[k][i][j] e_k on the labeled frame.
std::array<Mat3<double>, 3> structure_constants(double k, CenterLabeling labeling);

template <class S>
std::array<Vec4<S>, 3> labeled_frame(double k, CenterLabeling labeling, const Vec4<S>& p) {
  const auto w = invariant_frame(k, p);
  const auto perm = labeling_permutation(labeling);
  return {w[perm[0]], w[perm[1]], w[perm[2]]};
}

template <class S>
std::array<Vec4<S>, 3> labeled_coframe(double k, CenterLabeling labeling, const Vec4<S>& p) {
  const auto w = invariant_coframe(k, p);
  const auto perm = labeling_permutation(labeling);
  return {w[perm[0]], w[perm[1]], w[perm[2]]};
}

}  // namespace heis4
