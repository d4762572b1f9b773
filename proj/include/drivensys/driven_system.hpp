#pragma once

#include "drivensys/common.hpp"

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace drivensys {

enum class SystemKind { TanhEsn, LinearShift, RationalSaturating, HalfProduct, Custom };

std::string_view to_string(SystemKind kind);
SystemKind system_kind_from_string(std::string_view name);

/// g(u, x) for user-supplied systems.
using MapFn = std::function<Vector(const Vector& u, const Vector& x)>;

/// A driven system g: U x X -> X with U and X axis-aligned boxes.
///
/// Shipped kinds:
///   TanhEsn             g(u,x) = tanh(A u + alpha B x), X = [-1,1]^N
///   LinearShift         g(u,x) = u C + S x, S the (2d+1) lower shift, C = e_1
///   RationalSaturating  g(u,x) = u x / (1 + |x|), U = [0,2], X = [-2,2]
///   HalfProduct         g(u,x) = u x / 2, U = X = [0,1]
///
/// Construction checks that g maps U x X into X on seeded samples (plus all
/// corner pairs) unless a Custom system declares a containment certificate.
class SystemSpec {
 public:
  static SystemSpec tanh_esn(Matrix input_weights, Matrix recurrent, double alpha, Box input_box);
  /// Delay-line system of order d; the observable is assumed to take values
  /// in [obs_lower, obs_upper]. The state box is that range padded by 1%.
  static SystemSpec linear_shift(int d, double obs_lower = -1.0, double obs_upper = 1.0);
  static SystemSpec rational_saturating();
  static SystemSpec half_product();
  static SystemSpec custom(std::string name, Box input_box, Box state_box, MapFn map,
                           bool containment_certified = false);

  SystemKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const Box& input_box() const { return input_box_; }
  const Box& state_box() const { return state_box_; }
  std::size_t input_dim() const { return input_box_.dim(); }
  std::size_t state_dim() const { return state_box_.dim(); }

  // TanhEsn parameters.
  const Matrix& input_weights() const { return input_weights_; }
  const Matrix& recurrent() const { return recurrent_; }
  double alpha() const { return alpha_; }

  // LinearShift parameters.
  int delay_order() const { return delay_order_; }
  /// The (2d+1)x(2d+1) lower shift matrix (ones on the subdiagonal).
  Matrix shift_matrix() const;
  /// C = [1, 0, ..., 0]^T.
  Vector injection_vector() const;
  double observable_lower() const { return obs_lower_; }
  double observable_upper() const { return obs_upper_; }

  bool containment_certified() const { return containment_certified_; }

  /// g(u, x) without domain checks. `out` must not alias `x`.
  void map_into(const Vector& u, const Vector& x, Vector& out) const;
  Vector map(const Vector& u, const Vector& x) const;

 private:
  SystemSpec() = default;
  void verify_containment(std::uint64_t seed, std::size_t samples) const;

  SystemKind kind_ = SystemKind::Custom;
  std::string name_;
  Box input_box_;
  Box state_box_;
  Matrix input_weights_;
  Matrix recurrent_;
  double alpha_ = 0.0;
  int delay_order_ = 0;
  double obs_lower_ = 0.0;
  double obs_upper_ = 0.0;
  MapFn custom_map_;
  bool containment_certified_ = false;
};

/// Finite suffix (u_{-n}, ..., u_{-1}) of a left-infinite input, stored oldest
/// first so that back() is u_{-1}.
class InputWindow {
 public:
  InputWindow() = default;
  explicit InputWindow(std::vector<Vector> values) : values_(std::move(values)) {}

  static InputWindow constant(const Vector& value, std::size_t length);
  static InputWindow from_scalars(std::initializer_list<double> values);
  static InputWindow from_scalars(const std::vector<double>& values);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  /// Chronological access; index 0 is the oldest entry u_{-n}.
  const Vector& operator[](std::size_t i) const { return values_[i]; }
  /// u_{-lag}; lag 1 is the most recent input.
  const Vector& at_lag(std::size_t lag) const;
  const std::vector<Vector>& values() const { return values_; }

  /// sigma_v: append v as the new most recent input.
  InputWindow append(const Vector& v) const;
  /// r: drop the most recent input.
  InputWindow shift_right(std::size_t times = 1) const;
  /// The last k inputs.
  InputWindow suffix(std::size_t k) const;
  /// The first k (oldest) inputs.
  InputWindow prefix(std::size_t k) const;

  bool operator==(const InputWindow& other) const;

 private:
  std::vector<Vector> values_;
};

/// Finite segment x_m, ..., x_n of a solution together with the inputs that
/// produced it: states[i+1] = g(inputs[i], states[i]).
struct Trajectory {
  long start_index = 0;
  std::vector<Vector> states;
  std::vector<Vector> inputs;

  /// Largest |states[i+1] - g(inputs[i], states[i])|.
  double max_step_residual(const SystemSpec& sys) const;
};

/// g(u, x); rejects points outside the declared boxes.
Vector step(const SystemSpec& sys, const Vector& u, const Vector& x);

/// phi(0, -n, x) = g_{u_{-1}} o ... o g_{u_{-n}}(x). The empty window is the
/// identity.
Vector process(const SystemSpec& sys, const InputWindow& window, const Vector& x);

/// process() without domain checks, for callers that validated the window.
Vector process_unchecked(const SystemSpec& sys, const InputWindow& window, const Vector& x);

/// Throws DomainError unless every input lies in the input box.
void validate_window(const SystemSpec& sys, const InputWindow& window);
void validate_state(const SystemSpec& sys, const Vector& x);

/// |process(window, x) - process(late part, process(early part, x))| where
/// the early part is the oldest `split` inputs.
double cocycle_residual(const SystemSpec& sys, const InputWindow& window, std::size_t split,
                        const Vector& x);

/// The u with g(u, x) = y for a TanhEsn with square invertible A:
/// u = A^{-1}(atanh(y) - alpha B x). The result is not checked against the
/// input box.
Vector solve_input(const SystemSpec& sys, const Vector& x, const Vector& y);

/// Runs x0 forward under `inputs`, recording every state.
Trajectory simulate(const SystemSpec& sys, const Vector& x0, const std::vector<Vector>& inputs,
                    long start_index = 0);

}  // namespace drivensys
