#include "basinctl/integrator.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include "basinctl/errors.hpp"

namespace basinctl {

namespace {

void check_window(double dt, double t_end) {
  if (!std::isfinite(dt) || !std::isfinite(t_end) || dt <= 0.0 || t_end <= 0.0) {
    throw ValidationError("dt and t_end must be finite and positive");
  }
  if (dt > t_end) throw ValidationError("dt must not exceed the integration window");
}

std::string describe_blowup(std::size_t step, double t) {
  std::ostringstream msg;
  msg << "state became non-finite at step " << step << " (t = " << t
      << "); reduce dt or the integration window";
  return msg.str();
}

}  // namespace

std::vector<double> time_grid(double dt, double t_end) {
  check_window(dt, t_end);
  const double ratio = t_end / dt;
  const double nearest = std::round(ratio);
  // Treat t_end/dt within round-off of an integer as exact.
  const auto steps = static_cast<std::size_t>(
      std::abs(ratio - nearest) <= 1e-9 * nearest ? nearest : std::ceil(ratio));
  std::vector<double> times(steps + 1);
  for (std::size_t k = 0; k < steps; ++k) times[k] = static_cast<double>(k) * dt;
  times[steps] = t_end;
  return times;
}

Rk4Stepper::Rk4Stepper(const DynamicalSystem& system) : system_(system) {
  const auto n = static_cast<Eigen::Index>(system.dimension);
  k1_.resize(n);
  k2_.resize(n);
  k3_.resize(n);
  k4_.resize(n);
  stage_.resize(n);
}

void Rk4Stepper::eval(const Vector& y, Vector& out) {
  if (system_.rhs_into) {
    system_.rhs_into(y, out);
    return;
  }
  out = system_.rhs(y);
  if (out.size() != y.size()) {
    throw DimensionMismatch("rhs of '" + system_.name + "' returned " +
                            std::to_string(out.size()) + " components");
  }
}

void Rk4Stepper::step(Vector& y, double h) {
  if (static_cast<std::size_t>(y.size()) != system_.dimension) {
    throw DimensionMismatch("state does not match system '" + system_.name + "'");
  }
  eval(y, k1_);
  stage_ = y + 0.5 * h * k1_;
  eval(stage_, k2_);
  stage_ = y + 0.5 * h * k2_;
  eval(stage_, k3_);
  stage_ = y + h * k3_;
  eval(stage_, k4_);
  y += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
}

Vector rk4_step(const DynamicalSystem& system, const Vector& y, double h) {
  Vector out = y;
  Rk4Stepper(system).step(out, h);
  return out;
}

Trajectory integrate_trajectory(const DynamicalSystem& system, const Vector& y0, double dt,
                                double t_end) {
  Trajectory traj;
  traj.times = time_grid(dt, t_end);
  traj.states.reserve(traj.times.size());
  if (static_cast<std::size_t>(y0.size()) != system.dimension) {
    throw DimensionMismatch("initial state does not match system dimension");
  }
  if (!y0.allFinite()) throw NonFiniteState(0, y0, describe_blowup(0, 0.0));
  traj.states.push_back(y0);
  Rk4Stepper stepper(system);
  Vector y = y0;
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    stepper.step(y, traj.times[k] - traj.times[k - 1]);
    if (!y.allFinite()) throw NonFiniteState(k, traj.states.back(), describe_blowup(k, traj.times[k]));
    traj.states.push_back(y);
  }
  return traj;
}

VariationalResult integrate_variational(const DynamicalSystem& system, const Vector& y0,
                                        double dt, double t_end) {
  VariationalResult out;
  Trajectory& traj = out.trajectory;
  traj.times = time_grid(dt, t_end);
  const std::size_t points = traj.times.size();
  traj.states.reserve(points);
  out.matrices.reserve(points);

  const auto n = static_cast<Eigen::Index>(system.dimension);
  if (y0.size() != n) throw DimensionMismatch("initial state does not match system dimension");
  if (!y0.allFinite()) throw NonFiniteState(0, y0, describe_blowup(0, 0.0));
  traj.states.push_back(y0);
  out.matrices.push_back(Matrix::Identity(n, n));

  // RK4 on the augmented state (y, M) with reused stage buffers.
  Vector k1(n), k2(n), k3(n), k4(n), y_stage(n);
  Matrix l1(n, n), l2(n, n), l3(n, n), l4(n, n), m_stage(n, n);
  auto field = [&](const Vector& y, Vector& k) {
    if (system.rhs_into) {
      system.rhs_into(y, k);
    } else {
      k = evaluate_rhs(system, y);
    }
  };
  auto tangent = [&](const Vector& y, const Matrix& m, Matrix& l) {
    if (system.jacobian_product) {
      system.jacobian_product(y, m, l);
    } else {
      l = jacobian_times(system, y, m);
    }
  };

  for (std::size_t k = 1; k < points; ++k) {
    const double h = traj.times[k] - traj.times[k - 1];
    const Vector& y = traj.states.back();
    const Matrix& m = out.matrices.back();
    try {
      field(y, k1);
      tangent(y, m, l1);
      y_stage = y + 0.5 * h * k1;
      m_stage = m + 0.5 * h * l1;
      field(y_stage, k2);
      tangent(y_stage, m_stage, l2);
      y_stage = y + 0.5 * h * k2;
      m_stage = m + 0.5 * h * l2;
      field(y_stage, k3);
      tangent(y_stage, m_stage, l3);
      y_stage = y + h * k3;
      m_stage = m + h * l3;
      field(y_stage, k4);
      tangent(y_stage, m_stage, l4);
    } catch (const NonFiniteOutput&) {
      throw NonFiniteState(k, y, describe_blowup(k, traj.times[k]));
    }
    Vector y_next = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    Matrix m_next = m + (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    if (!y_next.allFinite() || !m_next.allFinite()) {
      throw NonFiniteState(k, y_next, describe_blowup(k, traj.times[k]));
    }
    traj.states.push_back(std::move(y_next));
    out.matrices.push_back(std::move(m_next));
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const std::size_t n = traj.states.empty() ? 0 : static_cast<std::size_t>(traj.states[0].size());
  out << "t";
  for (std::size_t i = 0; i < n; ++i) out << ",y" << i;
  out << '\n';
  out << std::setprecision(17);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << traj.times[k];
    for (Eigen::Index i = 0; i < traj.states[k].size(); ++i) out << ',' << traj.states[k][i];
    out << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write trajectory to " + path.string());
  write_trajectory_csv(out, traj);
}

}  // namespace basinctl
