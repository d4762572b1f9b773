#pragma once

#include "drivensys/driven_system.hpp"
#include "drivensys/encoding.hpp"
#include "drivensys/point_cloud.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <string_view>
#include <vector>

namespace drivensys {

/// (..., v_{-2}, v_{-1}, u_{-n}, ..., u_{-1}), cut to the last `total_depth`
/// entries (0 means |base|).
InputWindow splice_window(const InputWindow& base, const InputWindow& source, std::size_t n,
                          std::size_t total_depth = 0);

enum class GirstTrend { Converging, BoundedAway, Inconclusive };

std::string_view to_string(GirstTrend t);

struct GirstRow {
  std::size_t n = 0;
  /// d_H(E(w_n), E(u)).
  double distance = 0.0;
  /// dist(E(w_n), E(u)) and dist(E(u), E(w_n)).
  double semi_spliced_to_base = 0.0;
  double semi_base_to_spliced = 0.0;
};

struct GirstProbeReport {
  InputWindow base;
  InputWindow source;
  std::vector<GirstRow> rows;
  GirstTrend trend = GirstTrend::Inconclusive;
  /// Smallest distance; the r of a bounded-away verdict.
  double radius = 0.0;
  double epsilon = 0.0;
  double grid_spacing = 0.0;
};

struct GirstOptions {
  EncodingOptions encoding;
  unsigned threads = 1;
};

/// Trend rules: at least five n-values; converging when the last distance is
/// <= epsilon and the last three do not increase; bounded-away when every
/// distance is >= r with r > 10 * grid_spacing; otherwise inconclusive.
GirstTrend classify_girst(const std::vector<GirstRow>& rows, double epsilon, double grid_spacing);

/// Encodes every splice w_n and the base at depth |base| and compares them.
/// n_values must be strictly increasing and at most |base|.
GirstProbeReport girst_probe(const SystemSpec& sys, const InputWindow& base,
                             const InputWindow& source, const std::vector<std::size_t>& n_values,
                             const PointCloudSet& base_cloud, double epsilon,
                             const GirstOptions& options = {});

void write_girst_csv(std::ostream& os, const GirstProbeReport& report);
nlohmann::json to_json(const GirstProbeReport& report);

}  // namespace drivensys
