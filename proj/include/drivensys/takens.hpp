#pragma once

#include "drivensys/driven_system.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace drivensys {

using PlanePoint = Eigen::Vector2d;

/// Autonomous maps used to generate structured inputs.
///   logistic: x -> 4x(1-x) on [0,1] (second coordinate unused, kept 0)
///   henon:    (x,y) -> (1 - a x^2 + y, b x), a = 1.4, b = 0.3
class AutonomousMap {
 public:
  enum class Kind { Logistic, Henon };

  static AutonomousMap logistic();
  static AutonomousMap henon(double a = 1.4, double b = 0.3);
  static AutonomousMap from_name(std::string_view name);

  Kind kind() const { return kind_; }
  std::string_view name() const;
  bool invertible() const { return kind_ == Kind::Henon; }

  PlanePoint operator()(const PlanePoint& w) const;
  /// Exact inverse; only for the Henon map.
  PlanePoint inverse(const PlanePoint& w) const;
  /// A point whose orbit stays on the attractor, for seeding.
  PlanePoint default_seed() const;

 private:
  AutonomousMap(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
  Kind kind_;
  double a_;
  double b_;
};

using Observable = std::function<double(const PlanePoint&)>;

/// theta(w) = w_x.
Observable x_coordinate();
/// theta(w) = scale * w_x + offset.
Observable affine_x(double scale, double offset);
/// The shipped observable for each map: identity x for logistic (values in
/// [0,1]); Henon x divided by 1.3, which lands in [-1,1].
Observable default_observable(const AutonomousMap& map);

/// A forward orbit w_0, T(w_0), ..., read as history for delay coordinates.
class Orbit {
 public:
  Orbit(const AutonomousMap& map, const PlanePoint& seed, std::size_t length);

  std::size_t size() const { return points_.size(); }
  const PlanePoint& operator[](std::size_t n) const { return points_[n]; }
  const std::vector<PlanePoint>& points() const { return points_; }

 private:
  std::vector<PlanePoint> points_;
};

/// (theta(T^{-2d} w), ..., theta(T^{-1} w), theta(w)), oldest first.
struct DelayVector {
  std::vector<double> entries;

  std::size_t dimension() const { return entries.size(); }
  /// The linear-shift state holding this delay vector: newest observation
  /// in slot 0.
  Vector as_state() const;
};

/// Delay coordinates through the exact inverse of T. Throws
/// InsufficientHistoryError for non-invertible maps.
DelayVector delay_coordinates(const AutonomousMap& map, const Observable& theta,
                              const PlanePoint& w, int d);
/// Delay coordinates ending at orbit[index], read from stored history.
DelayVector delay_coordinates(const Orbit& orbit, std::size_t index, const Observable& theta,
                              int d);

/// The (2d+1)-dimensional delay line g(u,x) = uC + Sx; see
/// SystemSpec::linear_shift.
SystemSpec build_linear_shift_system(int d, double obs_lower = -1.0, double obs_upper = 1.0);

struct RealizationTrace {
  /// First n with state == delay vector at orbit[start + n].
  std::size_t steps_to_match = 0;
  /// max |state - delay vector| at the matching step.
  double match_error = 0.0;
  /// |state - delay vector| for n = 0 .. 2d+1.
  std::vector<double> errors;
};

/// Drives the delay line with u_n = theta(orbit[start + n]) (x_n = g(u_n,
/// x_{n-1})) from x0 and reports when the state first equals the delay
/// coordinates to within `tolerance`. Needs start >= 2d. Raises
/// ContractViolation if no match appears within 2d+2 steps.
RealizationTrace verify_delay_realization(const SystemSpec& shift_system, const Orbit& orbit,
                                          std::size_t start, const Observable& theta,
                                          const Vector& x0, double tolerance = 1e-12);

}  // namespace drivensys
