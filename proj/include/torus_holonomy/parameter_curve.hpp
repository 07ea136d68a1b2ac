#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace torus {

/// Smooth monotone time change tau: [0, duration] -> [0, target] with
/// tau(0) = 0 and tau(duration) = target.
struct Reparameterization {
  double duration;
  std::function<double(double)> map;
  std::function<double(double)> derivative;

  static Reparameterization identity(double duration);
  /// tau(t) = target * (t / duration)^2
  static Reparameterization quadratic(double target, double duration);
  /// tau(t) = target * s(t / duration) with the cubic smoothstep s, zero speed
  /// at both ends.
  static Reparameterization smoothstep(double target, double duration);
  /// tau(t) = target * (t/T + a sin(2 pi t/T) / (2 pi)), monotone for |a| < 1.
  static Reparameterization wobble(double target, double duration, double amplitude);
};

/// Path xi: [0, T] -> R^d in parameter space with velocity access.
class ParameterCurve {
 public:
  using Evaluator = std::function<Eigen::VectorXd(double)>;

  ParameterCurve(int dimension, double duration, Evaluator position, Evaluator velocity);

  /// Fixed point; zero velocity.
  static ParameterCurve constant(Eigen::VectorXd point, double duration);
  /// xi(t) = start + velocity * t
  static ParameterCurve linear(Eigen::VectorXd start, Eigen::VectorXd velocity, double duration);
  /// Counter-clockwise ellipse in the (axis_u, axis_v) plane starting at
  /// center + radius_u e_u, traversed `turns` times.
  static ParameterCurve ellipse(Eigen::VectorXd center, double radius_u, double radius_v,
                                int axis_u, int axis_v, double duration, int turns = 1);
  static ParameterCurve circle(Eigen::VectorXd center, double radius, int axis_u, int axis_v,
                               double duration, int turns = 1);
  /// Piecewise-linear path through the waypoints; each segment takes equal
  /// time and is traversed with smoothstep timing, so the velocity vanishes
  /// at every waypoint and the curve is C^1.
  static ParameterCurve waypoints(std::vector<Eigen::VectorXd> points, double duration);

  int dimension() const { return dimension_; }
  double duration() const { return duration_; }
  Eigen::VectorXd position(double t) const { return position_(t); }
  Eigen::VectorXd velocity(double t) const { return velocity_(t); }
  Eigen::VectorXd start() const { return position_(0.0); }
  Eigen::VectorXd end() const { return position_(duration_); }
  /// xi(0) == xi(T) within 1e-12.
  bool closed() const;

  /// Same path traversed backwards over the same duration.
  ParameterCurve reversed() const;
  /// xi o tau. Throws PreconditionError unless tau is monotone and maps
  /// [0, tau.duration] onto [0, duration()].
  ParameterCurve reparameterized(const Reparameterization& tau) const;
  /// This curve followed by `next`; the endpoints must agree within 1e-12.
  ParameterCurve followed_by(const ParameterCurve& next) const;

 private:
  int dimension_;
  double duration_;
  Evaluator position_;
  Evaluator velocity_;
};

inline constexpr double kClosedTolerance = 1e-12;

}  // namespace torus
