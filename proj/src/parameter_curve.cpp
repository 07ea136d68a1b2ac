#include "torus_holonomy/parameter_curve.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "torus_holonomy/errors.hpp"

namespace torus {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double smooth(double s) { return s * s * (3.0 - 2.0 * s); }
double smooth_rate(double s) { return 6.0 * s * (1.0 - s); }

}  // namespace

Reparameterization Reparameterization::identity(double duration) {
  return {duration, [](double t) { return t; }, [](double) { return 1.0; }};
}

Reparameterization Reparameterization::quadratic(double target, double duration) {
  return {duration,
          [=](double t) { return target * (t / duration) * (t / duration); },
          [=](double t) { return 2.0 * target * t / (duration * duration); }};
}

Reparameterization Reparameterization::smoothstep(double target, double duration) {
  return {duration, [=](double t) { return target * smooth(t / duration); },
          [=](double t) { return target * smooth_rate(t / duration) / duration; }};
}

Reparameterization Reparameterization::wobble(double target, double duration, double amplitude) {
  return {duration,
          [=](double t) {
            const double s = t / duration;
            return target * (s + amplitude * std::sin(kTwoPi * s) / kTwoPi);
          },
          [=](double t) {
            return target * (1.0 + amplitude * std::cos(kTwoPi * t / duration)) / duration;
          }};
}

ParameterCurve::ParameterCurve(int dimension, double duration, Evaluator position,
                               Evaluator velocity)
    : dimension_(dimension),
      duration_(duration),
      position_(std::move(position)),
      velocity_(std::move(velocity)) {
  if (dimension_ < 1) throw std::invalid_argument("parameter space dimension must be positive");
  if (!(duration_ > 0.0) || !std::isfinite(duration_))
    throw std::invalid_argument("curve duration must be positive and finite");
}

ParameterCurve ParameterCurve::constant(Eigen::VectorXd point, double duration) {
  const auto d = point.size();
  return ParameterCurve(static_cast<int>(d), duration, [point](double) { return point; },
                        [d](double) { return Eigen::VectorXd::Zero(d).eval(); });
}

ParameterCurve ParameterCurve::linear(Eigen::VectorXd start, Eigen::VectorXd velocity,
                                      double duration) {
  if (start.size() != velocity.size()) throw DimensionError("start and velocity differ in size");
  return ParameterCurve(
      static_cast<int>(start.size()), duration,
      [start, velocity](double t) { return (start + t * velocity).eval(); },
      [velocity](double) { return velocity; });
}

ParameterCurve ParameterCurve::ellipse(Eigen::VectorXd center, double radius_u, double radius_v,
                                       int axis_u, int axis_v, double duration, int turns) {
  const auto d = center.size();
  if (axis_u < 0 || axis_v < 0 || axis_u >= d || axis_v >= d || axis_u == axis_v)
    throw DimensionError("ellipse plane axes out of range");
  const double rate = kTwoPi * turns / duration;
  return ParameterCurve(
      static_cast<int>(d), duration,
      [=](double t) {
        Eigen::VectorXd p = center;
        p(axis_u) += radius_u * std::cos(rate * t);
        p(axis_v) += radius_v * std::sin(rate * t);
        return p;
      },
      [=](double t) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
        v(axis_u) = -radius_u * rate * std::sin(rate * t);
        v(axis_v) = radius_v * rate * std::cos(rate * t);
        return v;
      });
}

ParameterCurve ParameterCurve::circle(Eigen::VectorXd center, double radius, int axis_u,
                                      int axis_v, double duration, int turns) {
  return ellipse(std::move(center), radius, radius, axis_u, axis_v, duration, turns);
}

ParameterCurve ParameterCurve::waypoints(std::vector<Eigen::VectorXd> points, double duration) {
  if (points.size() < 2) throw std::invalid_argument("waypoint curve needs at least two points");
  const auto d = points.front().size();
  for (const auto& p : points)
    if (p.size() != d) throw DimensionError("waypoints of different dimension");
  auto shared = std::make_shared<const std::vector<Eigen::VectorXd>>(std::move(points));
  const auto segments = static_cast<double>(shared->size() - 1);
  const double seg_time = duration / segments;
  // Locates the segment holding t and the local fraction within it.
  auto locate = [shared, seg_time, segments](double t) {
    double u = std::clamp(t / seg_time, 0.0, segments);
    auto index = static_cast<std::size_t>(std::floor(u));
    if (index >= shared->size() - 1) index = shared->size() - 2;
    return std::pair{index, u - static_cast<double>(index)};
  };
  return ParameterCurve(
      static_cast<int>(d), duration,
      [shared, locate](double t) {
        auto [i, s] = locate(t);
        return ((*shared)[i] + smooth(s) * ((*shared)[i + 1] - (*shared)[i])).eval();
      },
      [shared, locate, seg_time](double t) {
        auto [i, s] = locate(t);
        return (smooth_rate(s) / seg_time * ((*shared)[i + 1] - (*shared)[i])).eval();
      });
}

bool ParameterCurve::closed() const {
  return (start() - end()).lpNorm<Eigen::Infinity>() <= kClosedTolerance;
}

ParameterCurve ParameterCurve::reversed() const {
  const double T = duration_;
  auto pos = position_;
  auto vel = velocity_;
  return ParameterCurve(
      dimension_, T, [pos, T](double t) { return pos(T - t); },
      [vel, T](double t) { return (-vel(T - t)).eval(); });
}

ParameterCurve ParameterCurve::reparameterized(const Reparameterization& tau) const {
  if (!(tau.duration > 0.0)) throw PreconditionError("reparameterization duration must be positive");
  const double scale = std::max(1.0, duration_);
  if (std::abs(tau.map(0.0)) > 1e-12 * scale ||
      std::abs(tau.map(tau.duration) - duration_) > 1e-12 * scale)
    throw PreconditionError("reparameterization does not preserve the curve endpoints");
  constexpr int kSamples = 1024;
  double previous = tau.map(0.0);
  for (int i = 0; i <= kSamples; ++i) {
    const double t = tau.duration * i / kSamples;
    const double value = tau.map(t);
    if (tau.derivative(t) < 0.0 || value < previous - 1e-14 * scale)
      throw PreconditionError("reparameterization is not monotone");
    previous = value;
  }
  auto pos = position_;
  auto vel = velocity_;
  return ParameterCurve(
      dimension_, tau.duration, [pos, tau](double t) { return pos(tau.map(t)); },
      [vel, tau](double t) { return (vel(tau.map(t)) * tau.derivative(t)).eval(); });
}

ParameterCurve ParameterCurve::followed_by(const ParameterCurve& next) const {
  if (next.dimension_ != dimension_) throw DimensionError("concatenating curves of different d");
  if ((end() - next.start()).lpNorm<Eigen::Infinity>() > kClosedTolerance)
    throw PreconditionError("curves do not join");
  const double T1 = duration_;
  auto p1 = position_, v1 = velocity_, p2 = next.position_, v2 = next.velocity_;
  return ParameterCurve(
      dimension_, T1 + next.duration_,
      [=](double t) { return t <= T1 ? p1(t) : p2(t - T1); },
      [=](double t) { return t <= T1 ? v1(t) : v2(t - T1); });
}

}  // namespace torus
