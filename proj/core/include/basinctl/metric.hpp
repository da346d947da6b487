#pragma once

#include <functional>
#include <string>

#include "basinctl/state.hpp"

namespace basinctl {

/// Distance between two states. Euclidean by default; a per-component
/// weighted Euclidean variant is available from config, and arbitrary
/// callables from code.
class Metric {
 public:
  enum class Kind { euclidean, weighted, custom };

  Metric() = default;

  static Metric euclidean() { return {}; }
  /// sqrt(sum_i w_i (a_i - b_i)^2). Throws ValidationError on negative or
  /// non-finite weights.
  static Metric weighted(Vector weights);
  static Metric custom(std::function<double(const Vector&, const Vector&)> fn);

  double operator()(const Vector& a, const Vector& b) const;

  Kind kind() const noexcept { return kind_; }
  const Vector& weights() const noexcept { return weights_; }
  std::string name() const;

  /// Row scaling S such that ||S v|| is the metric's local norm; empty
  /// vector means identity (euclidean and custom metrics).
  Vector sqrt_weights() const;

 private:
  Kind kind_ = Kind::euclidean;
  Vector weights_;
  std::function<double(const Vector&, const Vector&)> fn_;
};

}  // namespace basinctl
