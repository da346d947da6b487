#include "basinctl/state.hpp"

#include <utility>

#include "basinctl/errors.hpp"

namespace basinctl {

bool all_finite(const Vector& v) { return v.allFinite(); }
bool all_finite(const Matrix& m) { return m.allFinite(); }

SystemState::SystemState(Vector values) : values_(std::move(values)) {
  if (values_.size() == 0) throw DimensionMismatch("state must have at least one component");
  if (!values_.allFinite()) throw NonFiniteInput("state has non-finite components");
}

SystemState::SystemState(std::initializer_list<double> values)
    : SystemState(Vector::Map(values.begin(), static_cast<Eigen::Index>(values.size()))) {}

}  // namespace basinctl
