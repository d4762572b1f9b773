#pragma once

#include "drivensys/common.hpp"
#include "drivensys/driven_system.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace drivensys {

enum class Provenance { GridSample, Image, Union, Imported };

std::string_view to_string(Provenance p);

/// Tensor grid a cloud was sampled from. Kept so that images of the cloud can
/// be refined cell by cell.
struct GridSpec {
  Box box;
  std::vector<std::size_t> per_axis;

  std::size_t point_count() const;
  /// Smallest spacing over all axes.
  double min_spacing() const;
  /// Diameter of one grid cell.
  double cell_diameter() const;
};

/// Finite sample standing in for a compact subset of the state space.
/// Points are deduplicated at construction and kept in lexicographic order.
class PointCloudSet {
 public:
  PointCloudSet(std::vector<Vector> points, Provenance provenance,
                double dedup_tolerance = kDedupTolerance);

  static PointCloudSet singleton(const Vector& x);

  const std::vector<Vector>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(points_.front().size()); }
  Provenance provenance() const { return provenance_; }
  const std::optional<GridSpec>& grid() const { return grid_; }
  void set_grid(GridSpec grid) { grid_ = std::move(grid); }

  double diameter() const;
  Vector centroid() const;

 private:
  std::vector<Vector> points_;
  Provenance provenance_;
  std::optional<GridSpec> grid_;
};

/// Removes points within `tolerance` (max-norm) of an earlier kept point and
/// returns the survivors in lexicographic order.
std::vector<Vector> deduplicate(std::vector<Vector> points, double tolerance = kDedupTolerance);

/// sup_{a in A} inf_{b in B} |a - b|, evaluated exactly on the samples.
double hausdorff_semidistance(const PointCloudSet& a, const PointCloudSet& b);
double hausdorff_semidistance(const std::vector<Vector>& a, const std::vector<Vector>& b);
/// max of the two semidistances.
double hausdorff_distance(const PointCloudSet& a, const PointCloudSet& b);

enum class SamplingMethod { Grid, LatinHypercube };

struct SamplingOptions {
  SamplingMethod method = SamplingMethod::Grid;
  /// Points per axis for the grid.
  std::size_t per_axis = 0;
  /// Alternative to per_axis: total budget, per_axis = floor(budget^(1/N)).
  /// For Latin hypercube, the number of interior samples.
  std::size_t budget = 0;
  std::uint64_t seed = 0;
};

/// Deterministic grid (default) or seeded Latin-hypercube sample of the state
/// box. Every box corner is included.
PointCloudSet sample_state_space(const SystemSpec& sys, const SamplingOptions& options);
PointCloudSet sample_state_space(const SystemSpec& sys, std::size_t per_axis);

/// Uniform grid on a box; axis 0 varies fastest.
PointCloudSet grid_cloud(const Box& box, const std::vector<std::size_t>& per_axis);

/// {process(window, x) : x in set}, deduplicated.
PointCloudSet evolve_set(const SystemSpec& sys, const InputWindow& window,
                         const PointCloudSet& set, unsigned threads = 1,
                         double dedup_tolerance = kDedupTolerance);

// CSV: header "x0,...,x{N-1}" followed by one point per row.
void write_cloud_csv(std::ostream& os, const PointCloudSet& set);
PointCloudSet read_cloud_csv(std::istream& is);

}  // namespace drivensys
