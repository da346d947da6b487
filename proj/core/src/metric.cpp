#include "basinctl/metric.hpp"

#include <cmath>
#include <utility>

#include "basinctl/errors.hpp"

namespace basinctl {

Metric Metric::weighted(Vector weights) {
  if (!weights.allFinite() || (weights.array() < 0.0).any()) {
    throw ValidationError("metric weights must be finite and non-negative");
  }
  Metric m;
  m.kind_ = Kind::weighted;
  m.weights_ = std::move(weights);
  return m;
}

Metric Metric::custom(std::function<double(const Vector&, const Vector&)> fn) {
  if (!fn) throw ValidationError("custom metric needs a callable");
  Metric m;
  m.kind_ = Kind::custom;
  m.fn_ = std::move(fn);
  return m;
}

double Metric::operator()(const Vector& a, const Vector& b) const {
  if (a.size() != b.size()) throw DimensionMismatch("metric arguments differ in length");
  switch (kind_) {
    case Kind::euclidean:
      return (a - b).norm();
    case Kind::weighted:
      if (weights_.size() != a.size()) throw DimensionMismatch("metric weights length mismatch");
      return std::sqrt((weights_.array() * (a - b).array().square()).sum());
    case Kind::custom:
      return fn_(a, b);
  }
  return 0.0;
}

std::string Metric::name() const {
  switch (kind_) {
    case Kind::euclidean: return "euclidean";
    case Kind::weighted: return "weighted";
    case Kind::custom: return "custom";
  }
  return "euclidean";
}

Vector Metric::sqrt_weights() const {
  if (kind_ != Kind::weighted) return {};
  return weights_.cwiseSqrt();
}

}  // namespace basinctl
