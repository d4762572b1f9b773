#include "drivensys/common.hpp"

#include <cmath>

namespace drivensys {

Box::Box(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw InvalidArgument("box bounds must be nonempty and of equal dimension");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i])) {
      throw InvalidArgument("box bounds must be finite");
    }
    if (lower[i] > upper[i]) {
      throw InvalidArgument("box lower bound exceeds upper bound on axis " + std::to_string(i));
    }
  }
}

Box Box::cube(std::size_t dim, double lo, double hi) {
  return Box(Vector::Constant(static_cast<Eigen::Index>(dim), lo),
             Vector::Constant(static_cast<Eigen::Index>(dim), hi));
}

bool Box::contains(const Vector& x, double tol) const {
  if (x.size() != lower.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower[i] - tol && x[i] <= upper[i] + tol)) return false;
  }
  return true;
}

std::vector<Vector> Box::corners() const {
  const auto n = dim();
  if (n >= 30) throw InvalidArgument("too many box corners to enumerate");
  const std::size_t count = std::size_t{1} << n;
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vector c(static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a) {
      const auto i = static_cast<Eigen::Index>(a);
      c[i] = (mask >> a) & 1U ? upper[i] : lower[i];
    }
    out.push_back(std::move(c));
  }
  return out;
}

Vector scalar(double v) {
  Vector out(1);
  out[0] = v;
  return out;
}

}  // namespace drivensys
