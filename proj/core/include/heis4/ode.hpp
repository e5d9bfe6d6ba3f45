#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace heis4 {

using OdeRhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dy)>;

struct OdeEventSpec {
  std::string name;
  std::function<double(double t, const std::vector<double>& y)> value;
  int direction = 0;  // sign of the crossing: -1 falling, +1 rising, 0 either
};

enum class OdeStop { ReachedEnd, Event, StepUnderflow, MaxSteps, NonFinite };

const char* ode_stop_name(OdeStop s);

struct OdeEventHit {
  std::string name;
  double t = 0.0;
  std::vector<double> y;
};

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 = automatic
  double max_step = 0.0;      // 0 = whole span
  long max_steps = 1000000;
};

// Accepted-step skeleton of an adaptive Dormand-Prince 5(4) run. Dense values
// are produced by re-integrating from the nearest stored node, which keeps the
// evaluation error at the same order as the integration error without storing
// interpolation coefficients.
class OdeSolution {
 public:
  const std::vector<double>& times() const { return ts_; }
  const std::vector<std::vector<double>>& states() const { return ys_; }
  double t_front() const { return ts_.front(); }
  double t_back() const { return ts_.back(); }
  const std::vector<double>& y_back() const { return ys_.back(); }
  OdeStop stop() const { return stop_; }
  const std::optional<OdeEventHit>& event() const { return event_; }
  long steps_taken() const { return steps_; }

  // t must lie between t_front() and t_back() (inclusive, any direction).
  std::vector<double> eval(double t) const;

 private:
  friend OdeSolution integrate(const OdeRhs& rhs, std::vector<double> y0, double t0, double t1,
                               const OdeOptions& options, const std::vector<OdeEventSpec>& events);
  OdeRhs rhs_;
  OdeOptions options_;
  std::vector<double> ts_;
  std::vector<std::vector<double>> ys_;
  OdeStop stop_ = OdeStop::ReachedEnd;
  std::optional<OdeEventHit> event_;
  long steps_ = 0;
};

OdeSolution integrate(const OdeRhs& rhs, std::vector<double> y0, double t0, double t1,
                      const OdeOptions& options = {},
                      const std::vector<OdeEventSpec>& events = {});

}  // namespace heis4
