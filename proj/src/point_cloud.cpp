#include "drivensys/point_cloud.hpp"

#include "drivensys/io.hpp"
#include "drivensys/parallel.hpp"
#include "drivensys/random.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

namespace drivensys {

namespace {

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

double max_norm_distance(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::GridSample: return "grid-sample";
    case Provenance::Image: return "image";
    case Provenance::Union: return "union";
    case Provenance::Imported: return "imported";
  }
  return "imported";
}

std::size_t GridSpec::point_count() const {
  return std::accumulate(per_axis.begin(), per_axis.end(), std::size_t{1},
                         std::multiplies<>());
}

double GridSpec::min_spacing() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < per_axis.size(); ++a) {
    const auto i = static_cast<Eigen::Index>(a);
    const double width = box.upper[i] - box.lower[i];
    if (per_axis[a] > 1 && width > 0.0) {
      best = std::min(best, width / static_cast<double>(per_axis[a] - 1));
    }
  }
  return std::isfinite(best) ? best : 0.0;
}

double GridSpec::cell_diameter() const {
  double sq = 0.0;
  for (std::size_t a = 0; a < per_axis.size(); ++a) {
    const auto i = static_cast<Eigen::Index>(a);
    if (per_axis[a] > 1) {
      const double h = (box.upper[i] - box.lower[i]) / static_cast<double>(per_axis[a] - 1);
      sq += h * h;
    }
  }
  return std::sqrt(sq);
}

std::vector<Vector> deduplicate(std::vector<Vector> points, double tolerance) {
  std::sort(points.begin(), points.end(), lex_less);
  std::vector<Vector> kept;
  kept.reserve(points.size());
  for (auto& p : points) {
    bool duplicate = false;
    // Kept points are sorted on coordinate 0, so only the tail can be close.
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      if ((*it)[0] < p[0] - tolerance) break;
      if (max_norm_distance(*it, p) <= tolerance) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(std::move(p));
  }
  return kept;
}

PointCloudSet::PointCloudSet(std::vector<Vector> points, Provenance provenance,
                             double dedup_tolerance)
    : provenance_(provenance) {
  if (points.empty()) throw InvalidArgument("point cloud must be nonempty");
  const auto dim = points.front().size();
  if (dim == 0) throw InvalidArgument("points must have at least one coordinate");
  for (const auto& p : points) {
    if (p.size() != dim) throw InvalidArgument("points of mixed dimension");
    if (!p.allFinite()) throw InvalidArgument("non-finite point in cloud");
  }
  points_ = deduplicate(std::move(points), dedup_tolerance);
}

PointCloudSet PointCloudSet::singleton(const Vector& x) {
  return PointCloudSet({x}, Provenance::Imported);
}

double PointCloudSet::diameter() const {
  if (dim() == 1) {
    // Sorted, so the extremes are at the ends.
    return std::abs(points_.back()[0] - points_.front()[0]);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      best = std::max(best, (points_[i] - points_[j]).squaredNorm());
    }
  }
  return std::sqrt(best);
}

Vector PointCloudSet::centroid() const {
  Vector sum = Vector::Zero(points_.front().size());
  for (const auto& p : points_) sum += p;
  return sum / static_cast<double>(points_.size());
}

double hausdorff_semidistance(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  if (a.empty() || b.empty()) throw InvalidArgument("Hausdorff distance of an empty set");
  double worst = 0.0;
  for (const auto& p : a) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& q : b) {
      nearest = std::min(nearest, (p - q).squaredNorm());
      if (nearest <= worst) break;  // cannot raise the max any more
    }
    worst = std::max(worst, nearest);
  }
  return std::sqrt(worst);
}

double hausdorff_semidistance(const PointCloudSet& a, const PointCloudSet& b) {
  return hausdorff_semidistance(a.points(), b.points());
}

double hausdorff_distance(const PointCloudSet& a, const PointCloudSet& b) {
  return std::max(hausdorff_semidistance(a, b), hausdorff_semidistance(b, a));
}

PointCloudSet grid_cloud(const Box& box, const std::vector<std::size_t>& per_axis) {
  const auto dim = box.dim();
  if (per_axis.size() != dim) throw InvalidArgument("grid needs one resolution per axis");
  GridSpec spec{box, per_axis};
  for (auto n : per_axis) {
    if (n < 2) throw InvalidArgument("grid resolution must be at least 2 per axis");
  }
  const std::size_t total = spec.point_count();
  if (total > 50'000'000) throw InvalidArgument("grid too large");
  std::vector<Vector> pts;
  pts.reserve(total);
  std::vector<std::size_t> idx(dim, 0);
  for (std::size_t k = 0; k < total; ++k) {
    Vector p(static_cast<Eigen::Index>(dim));
    for (std::size_t a = 0; a < dim; ++a) {
      const auto i = static_cast<Eigen::Index>(a);
      const double lo = box.lower[i];
      const double hi = box.upper[i];
      const auto last = per_axis[a] - 1;
      p[i] = idx[a] == last ? hi
                            : lo + (hi - lo) * static_cast<double>(idx[a]) /
                                       static_cast<double>(last);
    }
    pts.push_back(std::move(p));
    for (std::size_t a = 0; a < dim; ++a) {
      if (++idx[a] < per_axis[a]) break;
      idx[a] = 0;
    }
  }
  PointCloudSet cloud(std::move(pts), Provenance::GridSample);
  cloud.set_grid(std::move(spec));
  return cloud;
}

PointCloudSet sample_state_space(const SystemSpec& sys, std::size_t per_axis) {
  SamplingOptions o;
  o.per_axis = per_axis;
  return sample_state_space(sys, o);
}

PointCloudSet sample_state_space(const SystemSpec& sys, const SamplingOptions& options) {
  const Box& box = sys.state_box();
  const auto dim = box.dim();
  if (options.method == SamplingMethod::Grid) {
    std::size_t per_axis = options.per_axis;
    if (per_axis == 0) {
      if (dim >= 64 || options.budget < (std::size_t{1} << dim)) {
        throw InvalidArgument("sampling budget below 2^N");
      }
      per_axis = static_cast<std::size_t>(
          std::floor(std::pow(static_cast<double>(options.budget), 1.0 / static_cast<double>(dim)) +
                     1e-9));
    }
    if (per_axis < 2) throw InvalidArgument("sampling needs at least 2 points per axis");
    return grid_cloud(box, std::vector<std::size_t>(dim, per_axis));
  }

  const std::size_t n = options.budget;
  if (n < 2) throw InvalidArgument("Latin hypercube needs a budget of at least 2");
  Rng rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vector> pts(n, Vector(static_cast<Eigen::Index>(dim)));
  std::vector<std::size_t> strata(n);
  for (std::size_t a = 0; a < dim; ++a) {
    const auto i = static_cast<Eigen::Index>(a);
    std::iota(strata.begin(), strata.end(), 0);
    std::shuffle(strata.begin(), strata.end(), rng);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = (static_cast<double>(strata[k]) + unit(rng)) / static_cast<double>(n);
      pts[k][i] = box.lower[i] + (box.upper[i] - box.lower[i]) * t;
    }
  }
  if (dim < 20) {
    for (auto& c : box.corners()) pts.push_back(std::move(c));
  }
  return PointCloudSet(std::move(pts), Provenance::GridSample);
}

PointCloudSet evolve_set(const SystemSpec& sys, const InputWindow& window,
                         const PointCloudSet& set, unsigned threads, double dedup_tolerance) {
  validate_window(sys, window);
  for (const auto& p : set.points()) validate_state(sys, p);
  if (window.empty()) return set;
  std::vector<Vector> images(set.size());
  parallel_for(set.size(), threads, [&](std::size_t i) {
    images[i] = process_unchecked(sys, window, set.points()[i]);
  });
  return PointCloudSet(std::move(images), Provenance::Image, dedup_tolerance);
}

void write_cloud_csv(std::ostream& os, const PointCloudSet& set) {
  CsvWriter w(os);
  std::vector<std::string> cols;
  for (std::size_t i = 0; i < set.dim(); ++i) cols.push_back("x" + std::to_string(i) + "[state]");
  w.header(cols);
  for (const auto& p : set.points()) {
    w.cells(p);
    w.end_row();
  }
}

PointCloudSet read_cloud_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("empty point cloud CSV");
  const auto dim = split_csv_line(line).size();
  std::vector<Vector> pts;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != dim) throw InvalidArgument("point row has the wrong arity");
    Vector p(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) p[static_cast<Eigen::Index>(i)] = std::stod(fields[i]);
    pts.push_back(std::move(p));
  }
  return PointCloudSet(std::move(pts), Provenance::Imported);
}

}  // namespace drivensys
