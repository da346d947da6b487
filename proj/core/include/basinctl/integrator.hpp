#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <vector>

#include "basinctl/system.hpp"

namespace basinctl {

/// Uniform time grid t_k = k*dt, last point clamped to t_end.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;

  std::size_t size() const noexcept { return times.size(); }
  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

struct VariationalResult {
  Trajectory trajectory;
  /// Fundamental matrices M(t_k); matrices[0] is the identity.
  std::vector<Matrix> matrices;
};

/// Grid times for a run of length t_end with step dt. The final step is
/// shortened so the last entry equals t_end exactly.
std::vector<double> time_grid(double dt, double t_end);

/// One classical RK4 step of size h.
Vector rk4_step(const DynamicalSystem& system, const Vector& y, double h);

/// RK4 with stage buffers reused across steps. Stages are not checked for
/// finiteness individually; NaN/Inf propagate into the stepped state, which
/// callers check.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(const DynamicalSystem& system);
  /// Advances y by h in place. Throws DimensionMismatch on size errors.
  void step(Vector& y, double h);

 private:
  void eval(const Vector& y, Vector& out);

  const DynamicalSystem& system_;
  Vector k1_, k2_, k3_, k4_, stage_;
};

/// Fixed-step RK4. Throws NonFiniteState when a step produces NaN/Inf.
Trajectory integrate_trajectory(const DynamicalSystem& system, const Vector& y0, double dt,
                                double t_end);

/// Co-integrates y' = F(y) and M' = J(y) M, M(0) = I, as one RK4 system.
VariationalResult integrate_variational(const DynamicalSystem& system, const Vector& y0,
                                        double dt, double t_end);

/// CSV with header `t,y0,...,y{n-1}` and 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

}  // namespace basinctl
