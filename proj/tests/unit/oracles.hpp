#pragma once

// Reference computations used as test oracles. Kept independent of the
// library's integrator and solver code paths.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

using State = std::vector<double>;
using Field = std::function<State(const State&)>;

/// Plain RK4 on std::vector with n steps of equal size.
inline State rk4(const Field& f, State y, double t_end, long steps) {
  const double h = t_end / static_cast<double>(steps);
  auto axpy = [](const State& a, double s, const State& b) {
    State out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + s * b[i];
    return out;
  };
  for (long k = 0; k < steps; ++k) {
    const State k1 = f(y);
    const State k2 = f(axpy(y, 0.5 * h, k1));
    const State k3 = f(axpy(y, 0.5 * h, k2));
    const State k4 = f(axpy(y, h, k3));
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  return y;
}

/// 2x2 problem: minimize ||d + M x|| over the box, ||x|| <= eps1 and
/// ||M x|| <= eps1 by exhaustive grid search with pitch eps1/200, then
/// an exact-geometry search along the boundary curves.
struct Grid2 {
  std::array<double, 4> m;  // row-major
  std::array<double, 2> d;
  std::array<double, 2> lo;
  std::array<double, 2> hi;
  double eps1;

  double objective(double x, double y) const {
    const double r0 = d[0] + m[0] * x + m[1] * y;
    const double r1 = d[1] + m[2] * x + m[3] * y;
    return std::hypot(r0, r1);
  }
  bool feasible(double x, double y) const {
    if (x < lo[0] || x > hi[0] || y < lo[1] || y > hi[1]) return false;
    if (std::hypot(x, y) > eps1) return false;
    return std::hypot(m[0] * x + m[1] * y, m[2] * x + m[3] * y) <= eps1;
  }

  /// Feasibility with a relative slack for points computed on a boundary.
  bool feasible_slack(double x, double y) const {
    const double s = 1e-12;
    const double bx = s * std::max(1.0, std::abs(x));
    const double by = s * std::max(1.0, std::abs(y));
    if (x < lo[0] - bx || x > hi[0] + bx || y < lo[1] - by || y > hi[1] + by) return false;
    if (std::hypot(x, y) > eps1 * (1.0 + s)) return false;
    return std::hypot(m[0] * x + m[1] * y, m[2] * x + m[3] * y) <= eps1 * (1.0 + s);
  }

  /// Best objective on the coarse grid alone.
  double coarse(double* bx = nullptr, double* by = nullptr) const {
    const double pitch = eps1 / 200.0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = -200; i <= 200; ++i) {
      for (int j = -200; j <= 200; ++j) {
        const double x = i * pitch;
        const double y = j * pitch;
        if (!feasible(x, y)) continue;
        const double v = objective(x, y);
        if (v < best) {
          best = v;
          if (bx) *bx = x;
          if (by) *by = y;
        }
      }
    }
    return best;
  }

  /// Exhaustive search over every place a minimizer of this convex problem
  /// can sit: the unconstrained minimizer, or a point on one of the boundary
  /// curves (four box edges, the circle ||x|| = eps1 and the ellipse
  /// ||M x|| = eps1). Each curve is sampled densely, then resampled around
  /// the best feasible sample with shrinking spacing.
  double boundary() const {
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](double x, double y) {
      if (feasible_slack(x, y)) best = std::min(best, objective(x, y));
    };
    consider(0.0, 0.0);

    const double det = m[0] * m[3] - m[1] * m[2];
    if (det != 0.0) {
      // x = -M^{-1} d
      consider(-(m[3] * d[0] - m[1] * d[1]) / det, -(-m[2] * d[0] + m[0] * d[1]) / det);
    }

    using Curve = std::function<std::array<double, 2>(double)>;
    std::vector<std::pair<Curve, std::array<double, 2>>> curves;
    const double span = 2.0 * eps1;
    for (int axis = 0; axis < 2; ++axis) {
      for (const double fixed : {lo[axis], hi[axis]}) {
        if (!std::isfinite(fixed)) continue;
        const int other = 1 - axis;
        const double a = std::max(lo[other], -span);
        const double b = std::min(hi[other], span);
        if (a > b) continue;
        curves.push_back({[=](double t) {
                            std::array<double, 2> pt{};
                            pt[axis] = fixed;
                            pt[other] = t;
                            return pt;
                          },
                          {a, b}});
      }
    }
    const double two_pi = 2.0 * 3.14159265358979323846;
    curves.push_back({[this](double t) {
                        return std::array<double, 2>{eps1 * std::cos(t), eps1 * std::sin(t)};
                      },
                      {0.0, two_pi}});
    if (det != 0.0) {
      curves.push_back({[this, det](double t) {
                          const double u = eps1 * std::cos(t);
                          const double v = eps1 * std::sin(t);
                          return std::array<double, 2>{(m[3] * u - m[1] * v) / det,
                                                       (-m[2] * u + m[0] * v) / det};
                        },
                        {0.0, two_pi}});
    }

    for (const auto& [curve, range] : curves) {
      double a = range[0];
      double b = range[1];
      double incumbent = std::numeric_limits<double>::infinity();
      for (int level = 0; level < 8; ++level) {
        const int samples = level == 0 ? 200000 : 2000;
        const double h = (b - a) / samples;
        double best_t = a;
        bool found = false;
        for (int i = 0; i <= samples; ++i) {
          const double t = a + i * h;
          const auto pt = curve(t);
          if (!feasible_slack(pt[0], pt[1])) continue;
          const double v = objective(pt[0], pt[1]);
          if (v < incumbent) {
            incumbent = v;
            best_t = t;
            found = true;
          }
        }
        if (!found) break;
        a = std::max(range[0], best_t - 2.0 * h);
        b = std::min(range[1], best_t + 2.0 * h);
      }
      best = std::min(best, incumbent);
    }
    return best;
  }
};

}  // namespace oracle
