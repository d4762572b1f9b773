#pragma once

#include "drivensys/driven_system.hpp"
#include "drivensys/point_cloud.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace drivensys {

inline constexpr double kDefaultSingletonEpsilon = 1e-6;

struct EncodingOptions {
  /// Deepest depth to evaluate; 0 means the full window.
  std::size_t depth = 0;
  /// Subdivide base-grid cells whose corner images spread wider than the
  /// tolerance. Only used when the base cloud carries a GridSpec and N <= 6.
  bool refine = true;
  /// 0 means the diameter of one base-grid cell.
  double refine_tolerance = 0.0;
  /// Budget of evaluated points per image, refinement included.
  std::size_t max_points = 200'000;
  std::size_t max_level = 1000;
  /// Keep the cloud of every depth (otherwise only the deepest one).
  bool keep_sets = true;
  /// Stop at the first depth whose diameter is <= epsilon.
  bool stop_at_singleton = false;
  double dedup_tolerance = kDedupTolerance;
  unsigned threads = 1;
};

/// Image of X sampled at one depth.
struct DepthImage {
  PointCloudSet set;
  /// Refinement ran out of budget; the cloud may have gaps wider than the
  /// tolerance. It is still a subset of the true image.
  bool saturated = false;
};

/// The image of `base` under the last `depth` inputs of `window`, i.e. a
/// sample of phi(0, -depth, X). Refines along expanding directions when the
/// base is a grid.
DepthImage image_at_depth(const SystemSpec& sys, const InputWindow& window, std::size_t depth,
                          const PointCloudSet& base, const EncodingOptions& options = {});

enum class EncodingVerdict { Singleton, NotContracting, Inconclusive };

std::string_view to_string(EncodingVerdict v);

/// True when the last `tail` diameters shrank by less than `relative`:
/// (d[n-tail] - d[n-1]) < relative * d[n-tail]. Needs at least `tail` values.
bool tail_non_shrinking(const std::vector<double>& diameters, std::size_t tail = 10,
                        double relative = 0.01);

/// Verdict for a diameter sequence cut at its last entry.
EncodingVerdict classify_diameters(const std::vector<double>& diameters, double epsilon);

struct EncodingResult {
  std::vector<std::size_t> depths;
  std::vector<double> diameters;
  /// One cloud per depth, or only the deepest when keep_sets was off.
  std::vector<PointCloudSet> sets;
  EncodingVerdict verdict = EncodingVerdict::Inconclusive;
  double epsilon = kDefaultSingletonEpsilon;
  /// Centroid of the deepest cloud when the verdict is Singleton.
  std::optional<Vector> representative;
  bool refinement_saturated = false;

  const PointCloudSet& final_set() const { return sets.back(); }
  double final_diameter() const { return diameters.back(); }
};

/// Finite-depth encodings E_1, ..., E_n of a window: E_k is the image of the
/// base cloud under the last k inputs.
EncodingResult encoding_approx(const SystemSpec& sys, const InputWindow& window,
                               const PointCloudSet& base,
                               double epsilon_singleton = kDefaultSingletonEpsilon,
                               const EncodingOptions& options = {});

/// Union of the deepest encoding clouds over the given windows.
PointCloudSet approx_reachable_set(const SystemSpec& sys, const std::vector<InputWindow>& windows,
                                   const PointCloudSet& base, const EncodingOptions& options = {});

void write_encoding_csv(std::ostream& os, const EncodingResult& result);
nlohmann::json to_json(const EncodingResult& result);

}  // namespace drivensys
