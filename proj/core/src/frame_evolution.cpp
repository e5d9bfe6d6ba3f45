#include "heis4/frame_evolution.hpp"

#include <sstream>

namespace heis4 {

Mat3<double> frame_metric_eta(const FrameEvolution& ev) {
  Mat3<double> eta = mat3_zero<double>();
  if (ev.labeling == CenterLabeling::Lightlike) {
    eta[0][1] = 1.0;
    eta[1][0] = 1.0;
    eta[2][2] = 1.0;
  } else {
    eta[0][0] = static_cast<double>(ev.eps);
    eta[1][1] = 1.0;
    eta[2][2] = 1.0;
  }
  return eta;
}

void check_time_in_domain(const FrameEvolution& ev, double t) {
  if (t > ev.t_min && t < ev.t_max) return;
  std::ostringstream os;
  os << "time coordinate " << t << " outside the maximal domain (" << ev.t_min << ", "
     << ev.t_max << ")";
  throw DomainError(os.str());
}

Metric metric_from_evolution(const FrameEvolution& ev) {
  return Metric::analytic([ev](const auto& pt) {
    using S = std::decay_t<decltype(pt[0])>;
    return evolution_metric_components<S>(ev, pt);
  });
}

StationarityDiagnostics stationarity_diagnostics(const FrameEvolution& ev, double t) {
  check_time_in_domain(ev, t);
  const Taylor4 sa = ev.a.series(t);
  const Taylor4 sb = ev.b.series(t);
  return {sa.deriv(1) / sa.value(), sb.deriv(1) / sb.value()};
}

}  // namespace heis4
