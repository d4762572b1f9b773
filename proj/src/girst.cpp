#include "drivensys/girst.hpp"

#include "drivensys/io.hpp"
#include "drivensys/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <ostream>

namespace drivensys {

InputWindow splice_window(const InputWindow& base, const InputWindow& source, std::size_t n,
                          std::size_t total_depth) {
  if (n > base.size()) throw InvalidArgument("splice length exceeds the base window");
  if (source.empty()) throw InvalidArgument("splice source must be nonempty");
  if (total_depth == 0) total_depth = base.size();
  std::vector<Vector> values = source.values();
  const auto& b = base.values();
  values.insert(values.end(), b.end() - static_cast<std::ptrdiff_t>(n), b.end());
  InputWindow w(std::move(values));
  return w.suffix(std::min(total_depth, w.size()));
}

std::string_view to_string(GirstTrend t) {
  switch (t) {
    case GirstTrend::Converging: return "converging";
    case GirstTrend::BoundedAway: return "bounded-away";
    case GirstTrend::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

GirstTrend classify_girst(const std::vector<GirstRow>& rows, double epsilon, double grid_spacing) {
  if (rows.size() < 5) return GirstTrend::Inconclusive;
  const std::size_t m = rows.size();
  bool tail_down = true;
  for (std::size_t i = m - 2; i < m; ++i) {
    if (rows[i].distance > rows[i - 1].distance + 1e-12) tail_down = false;
  }
  if (rows.back().distance <= epsilon && tail_down) return GirstTrend::Converging;
  double r = rows.front().distance;
  for (const auto& row : rows) r = std::min(r, row.distance);
  if (r > 10.0 * grid_spacing && r > epsilon) return GirstTrend::BoundedAway;
  return GirstTrend::Inconclusive;
}

GirstProbeReport girst_probe(const SystemSpec& sys, const InputWindow& base,
                             const InputWindow& source, const std::vector<std::size_t>& n_values,
                             const PointCloudSet& base_cloud, double epsilon,
                             const GirstOptions& options) {
  if (base.empty()) throw InvalidArgument("base window must be nonempty");
  for (std::size_t i = 1; i < n_values.size(); ++i) {
    if (n_values[i] <= n_values[i - 1]) throw InvalidArgument("n_values must be increasing");
  }
  validate_window(sys, base);
  validate_window(sys, source);

  EncodingOptions enc = options.encoding;
  enc.threads = 1;
  enc.keep_sets = false;

  GirstProbeReport rep;
  rep.base = base;
  rep.source = source;
  rep.epsilon = epsilon;
  rep.grid_spacing = base_cloud.grid() ? base_cloud.grid()->min_spacing() : 0.0;

  const PointCloudSet target = image_at_depth(sys, base, base.size(), base_cloud, enc).set;
  rep.rows.resize(n_values.size());
  parallel_for(n_values.size(), options.threads, [&](std::size_t i) {
    const InputWindow w = splice_window(base, source, n_values[i]);
    const PointCloudSet img = image_at_depth(sys, w, w.size(), base_cloud, enc).set;
    GirstRow& row = rep.rows[i];
    row.n = n_values[i];
    row.semi_spliced_to_base = hausdorff_semidistance(img, target);
    row.semi_base_to_spliced = hausdorff_semidistance(target, img);
    row.distance = std::max(row.semi_spliced_to_base, row.semi_base_to_spliced);
  });
  rep.trend = classify_girst(rep.rows, epsilon, rep.grid_spacing);
  if (!rep.rows.empty()) {
    rep.radius = rep.rows.front().distance;
    for (const auto& row : rep.rows) rep.radius = std::min(rep.radius, row.distance);
  }
  return rep;
}

void write_girst_csv(std::ostream& os, const GirstProbeReport& report) {
  CsvWriter w(os);
  w.header({"n[steps]", "distance[state]", "semi_spliced_to_base[state]",
            "semi_base_to_spliced[state]"});
  for (const auto& row : report.rows) {
    w.cell(row.n).cell(row.distance).cell(row.semi_spliced_to_base).cell(row.semi_base_to_spliced);
    w.end_row();
  }
}

nlohmann::json to_json(const GirstProbeReport& report) {
  nlohmann::json j;
  j["trend"] = std::string(to_string(report.trend));
  j["radius"] = report.radius;
  j["epsilon"] = report.epsilon;
  j["grid_spacing"] = report.grid_spacing;
  j["base_length"] = report.base.size();
  j["source_length"] = report.source.size();
  auto rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"n", row.n},
                    {"distance", row.distance},
                    {"semi_spliced_to_base", row.semi_spliced_to_base},
                    {"semi_base_to_spliced", row.semi_base_to_spliced}});
  }
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace drivensys
