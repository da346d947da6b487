#pragma once

#include <cstddef>
#include <initializer_list>

#include <Eigen/Core>

namespace basinctl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

/// State y of an n-dimensional system. Always finite, n >= 1.
class SystemState {
 public:
  /// Throws NonFiniteInput on NaN/Inf, DimensionMismatch on empty input.
  explicit SystemState(Vector values);
  SystemState(std::initializer_list<double> values);

  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

  const Vector& values() const noexcept { return values_; }
  operator const Vector&() const noexcept { return values_; }  // NOLINT(google-explicit-constructor)

  friend bool operator==(const SystemState& a, const SystemState& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  Vector values_;
};

}  // namespace basinctl
