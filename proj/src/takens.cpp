#include "drivensys/takens.hpp"

#include <algorithm>
#include <cmath>

namespace drivensys {

AutonomousMap AutonomousMap::logistic() { return AutonomousMap(Kind::Logistic, 4.0, 0.0); }

AutonomousMap AutonomousMap::henon(double a, double b) {
  if (b == 0.0) throw InvalidArgument("Henon map needs b != 0 to be invertible");
  return AutonomousMap(Kind::Henon, a, b);
}

AutonomousMap AutonomousMap::from_name(std::string_view name) {
  if (name == "logistic") return logistic();
  if (name == "henon") return henon();
  throw InvalidArgument("unknown autonomous map '" + std::string(name) + "'");
}

std::string_view AutonomousMap::name() const {
  return kind_ == Kind::Logistic ? "logistic" : "henon";
}

PlanePoint AutonomousMap::operator()(const PlanePoint& w) const {
  if (kind_ == Kind::Logistic) return {a_ * w.x() * (1.0 - w.x()), 0.0};
  return {1.0 - a_ * w.x() * w.x() + w.y(), b_ * w.x()};
}

PlanePoint AutonomousMap::inverse(const PlanePoint& w) const {
  if (kind_ != Kind::Henon) throw InvalidArgument("the logistic map has no inverse");
  const double x = w.y() / b_;
  return {x, w.x() - 1.0 + a_ * x * x};
}

PlanePoint AutonomousMap::default_seed() const {
  if (kind_ == Kind::Logistic) return {0.2, 0.0};
  PlanePoint w{0.0, 0.0};
  for (int i = 0; i < 1000; ++i) w = (*this)(w);
  return w;
}

Observable x_coordinate() {
  return [](const PlanePoint& w) { return w.x(); };
}

Observable affine_x(double scale, double offset) {
  return [scale, offset](const PlanePoint& w) { return scale * w.x() + offset; };
}

Observable default_observable(const AutonomousMap& map) {
  if (map.kind() == AutonomousMap::Kind::Logistic) return x_coordinate();
  return affine_x(1.0 / 1.3, 0.0);
}

Orbit::Orbit(const AutonomousMap& map, const PlanePoint& seed, std::size_t length) {
  if (length == 0) throw InvalidArgument("orbit length must be positive");
  points_.reserve(length);
  points_.push_back(seed);
  while (points_.size() < length) points_.push_back(map(points_.back()));
}

Vector DelayVector::as_state() const {
  Vector s(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    s[static_cast<Eigen::Index>(i)] = entries[entries.size() - 1 - i];
  }
  return s;
}

DelayVector delay_coordinates(const AutonomousMap& map, const Observable& theta,
                              const PlanePoint& w, int d) {
  if (d < 1) throw InvalidArgument("delay order d must be >= 1");
  if (!map.invertible()) {
    throw InsufficientHistoryError("map is not invertible; use a stored orbit for history");
  }
  const auto n = static_cast<std::size_t>(2 * d + 1);
  DelayVector dv;
  dv.entries.resize(n);
  PlanePoint cur = w;
  dv.entries[n - 1] = theta(cur);
  for (std::size_t j = 1; j < n; ++j) {
    cur = map.inverse(cur);
    dv.entries[n - 1 - j] = theta(cur);
  }
  return dv;
}

DelayVector delay_coordinates(const Orbit& orbit, std::size_t index, const Observable& theta,
                              int d) {
  if (d < 1) throw InvalidArgument("delay order d must be >= 1");
  const auto span = static_cast<std::size_t>(2 * d);
  if (index >= orbit.size()) throw InvalidArgument("orbit index out of range");
  if (index < span) {
    throw InsufficientHistoryError("orbit index " + std::to_string(index) + " has fewer than " +
                                   std::to_string(span) + " predecessors");
  }
  DelayVector dv;
  dv.entries.reserve(span + 1);
  for (std::size_t k = index - span; k <= index; ++k) dv.entries.push_back(theta(orbit[k]));
  return dv;
}

SystemSpec build_linear_shift_system(int d, double obs_lower, double obs_upper) {
  return SystemSpec::linear_shift(d, obs_lower, obs_upper);
}

RealizationTrace verify_delay_realization(const SystemSpec& shift_system, const Orbit& orbit,
                                          std::size_t start, const Observable& theta,
                                          const Vector& x0, double tolerance) {
  if (shift_system.kind() != SystemKind::LinearShift) {
    throw InvalidArgument("delay realization needs a linear-shift system");
  }
  const int d = shift_system.delay_order();
  const auto limit = static_cast<std::size_t>(2 * d + 2);
  if (start + limit >= orbit.size()) throw InsufficientHistoryError("orbit too short");
  validate_state(shift_system, x0);

  RealizationTrace trace;
  bool matched = false;
  Vector x = x0;
  for (std::size_t n = 0; n <= limit; ++n) {
    if (n > 0) x = step(shift_system, scalar(theta(orbit[start + n])), x);
    const Vector target = delay_coordinates(orbit, start + n, theta, d).as_state();
    const double err = (x - target).cwiseAbs().maxCoeff();
    trace.errors.push_back(err);
    if (!matched && err <= tolerance) {
      matched = true;
      trace.steps_to_match = n;
      trace.match_error = err;
    }
  }
  if (!matched) {
    throw ContractViolation("delay line did not realize the delay coordinates within 2d+2 steps");
  }
  return trace;
}

}  // namespace drivensys
