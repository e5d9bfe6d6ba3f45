#pragma once

#include <memory>
#include <utility>

#include "heis4/linalg.hpp"

namespace heis4 {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidBranchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularSlopeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A metric field evaluable at plain points and at jet-seeded points up to
// third order; the curvature engine picks the depth it needs.
class MetricField {
 public:
  virtual ~MetricField() = default;
  virtual Mat4<double> components(const Vec4<double>& p) const = 0;
  virtual Mat4<J1> components(const Vec4<J1>& p) const = 0;
  virtual Mat4<J2> components(const Vec4<J2>& p) const = 0;
  virtual Mat4<J3> components(const Vec4<J3>& p) const = 0;
};

template <class F>
class AnalyticMetric final : public MetricField {
 public:
  explicit AnalyticMetric(F f) : f_(std::move(f)) {}
  Mat4<double> components(const Vec4<double>& p) const override { return f_(p); }
  Mat4<J1> components(const Vec4<J1>& p) const override { return f_(p); }
  Mat4<J2> components(const Vec4<J2>& p) const override { return f_(p); }
  Mat4<J3> components(const Vec4<J3>& p) const override { return f_(p); }

 private:
  F f_;
};

// Value-semantic handle.
class Metric {
 public:
  Metric() = default;
  explicit Metric(std::shared_ptr<const MetricField> field) : field_(std::move(field)) {}

  template <class F>
  static Metric analytic(F f) {
    return Metric(std::make_shared<AnalyticMetric<F>>(std::move(f)));
  }

  const MetricField& field() const { return *field_; }
  bool valid() const { return static_cast<bool>(field_); }

  template <class S>
  Mat4<S> components(const Vec4<S>& p) const {
    return field_->components(p);
  }

 private:
  std::shared_ptr<const MetricField> field_;
};

}  // namespace heis4
