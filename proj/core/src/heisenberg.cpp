#include "heis4/heisenberg.hpp"

namespace heis4 {

std::array<double, 3> group_multiply(const std::array<double, 3>& p,
                                     const std::array<double, 3>& q) {
  return {p[0] + q[0], p[1] + q[1], p[2] + q[2] + q[1] * p[0] - q[0] * p[1]};
}

std::array<double, 3> twisted_multiply(double k, const std::array<double, 3>& p,
                                       const std::array<double, 3>& q) {
  return {p[0] + q[0], p[1] + q[1], p[2] + q[2] + k * (q[1] * p[0] - q[0] * p[1])};
}

std::array<int, 3> labeling_permutation(CenterLabeling labeling) {
  switch (labeling) {
    case CenterLabeling::Spacelike:
      return {1, 2, 0};
    case CenterLabeling::TimelikeOrRiemannian:
    case CenterLabeling::Lightlike:
    default:
      return {0, 1, 2};
  }
}

std::array<Mat3<double>, 3> structure_constants(double k, CenterLabeling labeling) {
  std::array<Mat3<double>, 3> c{mat3_zero<double>(), mat3_zero<double>(), mat3_zero<double>()};
  // On the unlabeled frame [w_2, w_3] = -2k w_1; conjugating by the labeling
  // permutation moves the center slot.
  switch (labeling) {
    case CenterLabeling::Spacelike:
      c[2][0][1] = -2.0 * k;
      c[2][1][0] = 2.0 * k;
      break;
    case CenterLabeling::TimelikeOrRiemannian:
    case CenterLabeling::Lightlike:
    default:
      c[0][1][2] = -2.0 * k;
      c[0][2][1] = 2.0 * k;
      break;
  }
  return c;
}

}  // namespace heis4
