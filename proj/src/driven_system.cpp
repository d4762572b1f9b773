#include "drivensys/driven_system.hpp"

#include "drivensys/random.hpp"

#include <cmath>

namespace drivensys {

namespace {

constexpr std::uint64_t kContainmentSeed = 0x5eed'c0de;
constexpr std::size_t kContainmentSamples = 1000;

}  // namespace

std::string_view to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::TanhEsn: return "tanh_esn";
    case SystemKind::LinearShift: return "linear_shift";
    case SystemKind::RationalSaturating: return "rational_saturating";
    case SystemKind::HalfProduct: return "half_product";
    case SystemKind::Custom: return "custom";
  }
  return "custom";
}

SystemKind system_kind_from_string(std::string_view name) {
  if (name == "tanh_esn") return SystemKind::TanhEsn;
  if (name == "linear_shift") return SystemKind::LinearShift;
  if (name == "rational_saturating") return SystemKind::RationalSaturating;
  if (name == "half_product") return SystemKind::HalfProduct;
  if (name == "custom") return SystemKind::Custom;
  throw InvalidArgument("unknown system kind '" + std::string(name) + "'");
}

SystemSpec SystemSpec::tanh_esn(Matrix input_weights, Matrix recurrent, double alpha,
                                Box input_box) {
  const auto n = recurrent.rows();
  if (n == 0 || recurrent.cols() != n) throw InvalidArgument("B must be square and nonempty");
  if (input_weights.rows() != n) throw InvalidArgument("A must have as many rows as B");
  if (input_weights.cols() != static_cast<Eigen::Index>(input_box.dim())) {
    throw InvalidArgument("A must have one column per input dimension");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be nonnegative");
  if (!input_weights.allFinite() || !recurrent.allFinite()) {
    throw InvalidArgument("ESN matrices must be finite");
  }
  SystemSpec s;
  s.kind_ = SystemKind::TanhEsn;
  s.name_ = "tanh_esn";
  s.input_box_ = std::move(input_box);
  s.state_box_ = Box::cube(static_cast<std::size_t>(n), -1.0, 1.0);
  s.input_weights_ = std::move(input_weights);
  s.recurrent_ = std::move(recurrent);
  s.alpha_ = alpha;
  // N up to a few hundred is cheap enough to sample.
  s.verify_containment(kContainmentSeed, kContainmentSamples);
  return s;
}

SystemSpec SystemSpec::linear_shift(int d, double obs_lower, double obs_upper) {
  if (d < 1) throw InvalidArgument("delay order d must be >= 1");
  if (!(obs_lower < obs_upper)) throw InvalidArgument("observable range must be nonempty");
  SystemSpec s;
  s.kind_ = SystemKind::LinearShift;
  s.name_ = "linear_shift";
  s.delay_order_ = d;
  s.obs_lower_ = obs_lower;
  s.obs_upper_ = obs_upper;
  const double pad = 0.01 * (obs_upper - obs_lower);
  s.input_box_ = Box::cube(1, obs_lower, obs_upper);
  s.state_box_ = Box::cube(static_cast<std::size_t>(2 * d + 1), obs_lower - pad, obs_upper + pad);
  s.verify_containment(kContainmentSeed, kContainmentSamples);
  return s;
}

SystemSpec SystemSpec::rational_saturating() {
  SystemSpec s;
  s.kind_ = SystemKind::RationalSaturating;
  s.name_ = "rational_saturating";
  s.input_box_ = Box::cube(1, 0.0, 2.0);
  s.state_box_ = Box::cube(1, -2.0, 2.0);
  s.verify_containment(kContainmentSeed, kContainmentSamples);
  return s;
}

SystemSpec SystemSpec::half_product() {
  SystemSpec s;
  s.kind_ = SystemKind::HalfProduct;
  s.name_ = "half_product";
  s.input_box_ = Box::cube(1, 0.0, 1.0);
  s.state_box_ = Box::cube(1, 0.0, 1.0);
  s.verify_containment(kContainmentSeed, kContainmentSamples);
  return s;
}

SystemSpec SystemSpec::custom(std::string name, Box input_box, Box state_box, MapFn map,
                              bool containment_certified) {
  if (!map) throw InvalidArgument("custom system needs a map");
  SystemSpec s;
  s.kind_ = SystemKind::Custom;
  s.name_ = std::move(name);
  s.input_box_ = std::move(input_box);
  s.state_box_ = std::move(state_box);
  s.custom_map_ = std::move(map);
  s.containment_certified_ = containment_certified;
  if (!containment_certified) s.verify_containment(kContainmentSeed, kContainmentSamples);
  return s;
}

Matrix SystemSpec::shift_matrix() const {
  if (kind_ != SystemKind::LinearShift) throw InvalidArgument("not a linear-shift system");
  const auto n = static_cast<Eigen::Index>(state_dim());
  Matrix s = Matrix::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) s(i, i - 1) = 1.0;
  return s;
}

Vector SystemSpec::injection_vector() const {
  if (kind_ != SystemKind::LinearShift) throw InvalidArgument("not a linear-shift system");
  Vector c = Vector::Zero(static_cast<Eigen::Index>(state_dim()));
  c[0] = 1.0;
  return c;
}

void SystemSpec::map_into(const Vector& u, const Vector& x, Vector& out) const {
  switch (kind_) {
    case SystemKind::TanhEsn:
      out.noalias() = input_weights_ * u;
      out.noalias() += alpha_ * (recurrent_ * x);
      out = out.array().tanh();
      return;
    case SystemKind::LinearShift: {
      // uC + Sx: newest observation in slot 0, everything else moves down.
      const auto n = x.size();
      out.resize(n);
      out[0] = u[0];
      for (Eigen::Index i = 1; i < n; ++i) out[i] = x[i - 1];
      return;
    }
    case SystemKind::RationalSaturating:
      out.resize(1);
      out[0] = u[0] * x[0] / (1.0 + std::abs(x[0]));
      return;
    case SystemKind::HalfProduct:
      out.resize(1);
      out[0] = u[0] * x[0] / 2.0;
      return;
    case SystemKind::Custom:
      out = custom_map_(u, x);
      return;
  }
}

Vector SystemSpec::map(const Vector& u, const Vector& x) const {
  Vector out(x.size());
  map_into(u, x, out);
  return out;
}

void SystemSpec::verify_containment(std::uint64_t seed, std::size_t samples) const {
  Rng rng(seed);
  auto check = [&](const Vector& u, const Vector& x) {
    const Vector y = map(u, x);
    if (!state_box_.contains(y)) {
      throw InvalidArgument("system '" + name_ + "' maps a sampled point outside its state box");
    }
  };
  if (input_dim() <= 6 && state_dim() <= 6) {
    for (const auto& u : input_box_.corners()) {
      for (const auto& x : state_box_.corners()) check(u, x);
    }
  }
  for (std::size_t i = 0; i < samples; ++i) {
    const Vector u = uniform_in_box(input_box_, rng);
    const Vector x = uniform_in_box(state_box_, rng);
    check(u, x);
  }
}

InputWindow InputWindow::constant(const Vector& value, std::size_t length) {
  return InputWindow(std::vector<Vector>(length, value));
}

InputWindow InputWindow::from_scalars(std::initializer_list<double> values) {
  return from_scalars(std::vector<double>(values));
}

InputWindow InputWindow::from_scalars(const std::vector<double>& values) {
  std::vector<Vector> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(scalar(v));
  return InputWindow(std::move(out));
}

const Vector& InputWindow::at_lag(std::size_t lag) const {
  if (lag == 0 || lag > values_.size()) throw InvalidArgument("lag outside window");
  return values_[values_.size() - lag];
}

InputWindow InputWindow::append(const Vector& v) const {
  auto out = values_;
  out.push_back(v);
  return InputWindow(std::move(out));
}

InputWindow InputWindow::shift_right(std::size_t times) const {
  if (times > values_.size()) throw InvalidArgument("cannot shift past the start of the window");
  return prefix(values_.size() - times);
}

InputWindow InputWindow::suffix(std::size_t k) const {
  if (k > values_.size()) throw InvalidArgument("suffix longer than window");
  return InputWindow(std::vector<Vector>(values_.end() - static_cast<std::ptrdiff_t>(k),
                                         values_.end()));
}

InputWindow InputWindow::prefix(std::size_t k) const {
  if (k > values_.size()) throw InvalidArgument("prefix longer than window");
  return InputWindow(std::vector<Vector>(values_.begin(),
                                         values_.begin() + static_cast<std::ptrdiff_t>(k)));
}

bool InputWindow::operator==(const InputWindow& other) const {
  if (values_.size() != other.values_.size()) return false;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i].size() != other.values_[i].size() || values_[i] != other.values_[i]) {
      return false;
    }
  }
  return true;
}

double Trajectory::max_step_residual(const SystemSpec& sys) const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < states.size() && i < inputs.size(); ++i) {
    worst = std::max(worst, distance(states[i + 1], sys.map(inputs[i], states[i])));
  }
  return worst;
}

void validate_window(const SystemSpec& sys, const InputWindow& window) {
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (!sys.input_box().contains(window[i])) {
      throw DomainError("input at position " + std::to_string(i) + " lies outside the input box");
    }
  }
}

void validate_state(const SystemSpec& sys, const Vector& x) {
  if (!sys.state_box().contains(x)) throw DomainError("state lies outside the state box");
}

Vector step(const SystemSpec& sys, const Vector& u, const Vector& x) {
  if (!sys.input_box().contains(u)) throw DomainError("input lies outside the input box");
  validate_state(sys, x);
  return sys.map(u, x);
}

Vector process_unchecked(const SystemSpec& sys, const InputWindow& window, const Vector& x) {
  Vector cur = x;
  Vector next(x.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    sys.map_into(window[i], cur, next);
    cur.swap(next);
  }
  return cur;
}

Vector process(const SystemSpec& sys, const InputWindow& window, const Vector& x) {
  validate_window(sys, window);
  validate_state(sys, x);
  return process_unchecked(sys, window, x);
}

double cocycle_residual(const SystemSpec& sys, const InputWindow& window, std::size_t split,
                        const Vector& x) {
  if (split > window.size()) throw InvalidArgument("split index exceeds window length");
  const Vector whole = process(sys, window, x);
  const Vector mid = process(sys, window.prefix(split), x);
  const Vector parts = process(sys, window.suffix(window.size() - split), mid);
  return distance(whole, parts);
}

Vector solve_input(const SystemSpec& sys, const Vector& x, const Vector& y) {
  if (sys.kind() != SystemKind::TanhEsn) throw InvalidArgument("solve_input needs a TanhEsn");
  const Matrix& a = sys.input_weights();
  if (a.rows() != a.cols()) throw InvalidArgument("solve_input needs a square input matrix");
  if (y.size() != a.rows()) throw InvalidArgument("target has the wrong dimension");
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!(std::abs(y[i]) < 1.0)) {
      throw InversionDomainError("target coordinate " + std::to_string(i) +
                                 " is not inside the open cube (-1, 1)");
    }
  }
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw InvalidArgument("input matrix is numerically singular");
  const Vector rhs = y.array().atanh().matrix() - sys.alpha() * (sys.recurrent() * x);
  return lu.solve(rhs);
}

Trajectory simulate(const SystemSpec& sys, const Vector& x0, const std::vector<Vector>& inputs,
                    long start_index) {
  validate_state(sys, x0);
  Trajectory t;
  t.start_index = start_index;
  t.inputs = inputs;
  t.states.reserve(inputs.size() + 1);
  t.states.push_back(x0);
  Vector next(x0.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!sys.input_box().contains(inputs[i])) {
      throw DomainError("input at step " + std::to_string(i) + " lies outside the input box");
    }
    sys.map_into(inputs[i], t.states.back(), next);
    t.states.push_back(next);
  }
  return t;
}

}  // namespace drivensys
