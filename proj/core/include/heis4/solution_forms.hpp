#pragma once

#include <array>

#include "heis4/forms.hpp"
#include "heis4/solutions.hpp"

namespace heis4 {

// Two-forms attached to a catalog solution. The basic triple is the self-dual
// extension of the evolved coframe paired against dt,
//   omega_i = dt ^ eth^i + star(dt ^ eth^i),
// optionally rescaled by a scalar field evaluated along the flow.
enum class FormScale {
  Unit,                // no rescaling
  WeylPower,           // |W_{abcd} W^{abcd}|^{1/3}, the Kahler rescaling
  CoefficientProduct,  // a(t) b(t), closing the off-center pair
};

TwoForm solution_two_form(const Solution& sol, int index, int ori,
                          FormScale scale = FormScale::Unit);

std::array<TwoForm, 3> solution_form_triple(const Solution& sol, int ori);

// Index (1-based) of the coframe row dual to the central direction of the
// nilpotent symmetry; the labeling permutes which slot that is.
int center_form_index(CenterLabeling labeling);

// Orientation calibrating the whole catalog: with ori = +1 every parallel
// triple closes and every conformal closure below holds. The Weyl tensor of
// the parallel families is then self-dual for the reversed orientation.
inline constexpr int kCatalogOrientation = +1;

// Residuals of the parallel-triple laws at one point:
//   closure = max_i |d omega_i|,
//   wedge   = max_{ij} |omega_i ^ omega_j - 2 eps eta_{ij} dvol|.
struct TripleResiduals {
  double closure = 0.0;
  double wedge = 0.0;
};
TripleResiduals parallel_triple_residuals(const Solution& sol, int ori, const Vec4<double>& p);

// Residuals of the conformally-Kahler closures at one point:
//   center = |d(|W|^{2/3} omega_c)| for the central index c,
//   pair   = max of |d(a b omega_i)| over the two remaining indices.
struct ClosureResiduals {
  double center = 0.0;
  double pair = 0.0;
};
ClosureResiduals conformal_closure_residuals(const Solution& sol, int ori, const Vec4<double>& p);

}  // namespace heis4
