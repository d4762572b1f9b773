#include "drivensys/encoding.hpp"

#include "drivensys/io.hpp"
#include "drivensys/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace drivensys {

namespace {

constexpr std::size_t kMaxRefineDim = 6;

double spread(const std::vector<Vector>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      best = std::max(best, (pts[i] - pts[j]).squaredNorm());
    }
  }
  return std::sqrt(best);
}

struct Cell {
  Vector lo;
  Vector hi;
  std::vector<Vector> corner_images;  // indexed by corner mask, axis 0 = bit 0
  std::size_t level = 0;
};

std::size_t pow3(std::size_t n) {
  std::size_t p = 1;
  for (std::size_t i = 0; i < n; ++i) p *= 3;
  return p;
}

// Images of the grid plus adaptive subdivision of cells whose corner images
// spread wider than `tol`. Every returned point is the image of a point of
// the grid box, so the result never overshoots the true image.
std::vector<Vector> refined_image(const SystemSpec& sys, const InputWindow& inputs,
                                  const GridSpec& grid, double tol,
                                  const EncodingOptions& options, bool& saturated) {
  const std::size_t dim = grid.box.dim();
  const std::size_t corners = std::size_t{1} << dim;
  const std::size_t total = grid.point_count();

  std::vector<Vector> grid_points(total);
  {
    std::vector<std::size_t> idx(dim, 0);
    for (std::size_t k = 0; k < total; ++k) {
      Vector p(static_cast<Eigen::Index>(dim));
      for (std::size_t a = 0; a < dim; ++a) {
        const auto i = static_cast<Eigen::Index>(a);
        const auto last = grid.per_axis[a] - 1;
        p[i] = idx[a] == last ? grid.box.upper[i]
                              : grid.box.lower[i] + (grid.box.upper[i] - grid.box.lower[i]) *
                                                        static_cast<double>(idx[a]) /
                                                        static_cast<double>(last);
      }
      grid_points[k] = std::move(p);
      for (std::size_t a = 0; a < dim; ++a) {
        if (++idx[a] < grid.per_axis[a]) break;
        idx[a] = 0;
      }
    }
  }

  std::vector<Vector> images(total);
  parallel_for(total, options.threads, [&](std::size_t k) {
    images[k] = process_unchecked(sys, inputs, grid_points[k]);
  });

  std::vector<std::size_t> stride(dim, 1);
  for (std::size_t a = 1; a < dim; ++a) stride[a] = stride[a - 1] * grid.per_axis[a - 1];

  std::vector<Cell> frontier;
  {
    std::vector<std::size_t> idx(dim, 0);
    std::size_t cells = 1;
    for (auto n : grid.per_axis) cells *= n - 1;
    for (std::size_t c = 0; c < cells; ++c) {
      std::size_t base = 0;
      for (std::size_t a = 0; a < dim; ++a) base += idx[a] * stride[a];
      std::vector<Vector> corner_images(corners);
      for (std::size_t m = 0; m < corners; ++m) {
        std::size_t flat = base;
        for (std::size_t a = 0; a < dim; ++a) flat += ((m >> a) & 1U) * stride[a];
        corner_images[m] = images[flat];
      }
      if (spread(corner_images) > tol) {
        std::size_t hi_flat = base;
        for (std::size_t a = 0; a < dim; ++a) hi_flat += stride[a];
        frontier.push_back(Cell{grid_points[base], grid_points[hi_flat], std::move(corner_images), 0});
      }
      for (std::size_t a = 0; a < dim; ++a) {
        if (++idx[a] < grid.per_axis[a] - 1) break;
        idx[a] = 0;
      }
    }
  }

  std::vector<Vector> out = std::move(images);
  const std::size_t lattice = pow3(dim);
  while (!frontier.empty()) {
    // Each split evaluates the 3^N lattice of the cell minus its corners.
    const std::size_t fresh_per_cell = lattice - corners;
    if (out.size() + frontier.size() * fresh_per_cell > options.max_points) {
      saturated = true;
      break;
    }
    std::vector<std::vector<Vector>> lattice_images(frontier.size());
    parallel_for(frontier.size(), options.threads, [&](std::size_t f) {
      const Cell& cell = frontier[f];
      auto& li = lattice_images[f];
      li.resize(lattice);
      for (std::size_t t = 0; t < lattice; ++t) {
        std::size_t rem = t;
        std::size_t mask = 0;
        bool is_corner = true;
        Vector p(static_cast<Eigen::Index>(dim));
        for (std::size_t a = 0; a < dim; ++a) {
          const auto i = static_cast<Eigen::Index>(a);
          const std::size_t digit = rem % 3;
          rem /= 3;
          if (digit == 1) {
            is_corner = false;
            p[i] = 0.5 * (cell.lo[i] + cell.hi[i]);
          } else {
            p[i] = digit == 0 ? cell.lo[i] : cell.hi[i];
            if (digit == 2) mask |= std::size_t{1} << a;
          }
        }
        li[t] = is_corner ? cell.corner_images[mask] : process_unchecked(sys, inputs, p);
      }
    });

    std::vector<Cell> next;
    for (std::size_t f = 0; f < frontier.size(); ++f) {
      const Cell& cell = frontier[f];
      const auto& li = lattice_images[f];
      for (std::size_t t = 0; t < lattice; ++t) {
        std::size_t rem = t;
        bool is_corner = true;
        for (std::size_t a = 0; a < dim; ++a) {
          if (rem % 3 == 1) is_corner = false;
          rem /= 3;
        }
        if (!is_corner) out.push_back(li[t]);
      }
      if (cell.level + 1 >= options.max_level) {
        saturated = true;
        continue;
      }
      for (std::size_t child = 0; child < corners; ++child) {
        Cell c;
        c.level = cell.level + 1;
        c.lo.resize(static_cast<Eigen::Index>(dim));
        c.hi.resize(static_cast<Eigen::Index>(dim));
        for (std::size_t a = 0; a < dim; ++a) {
          const auto i = static_cast<Eigen::Index>(a);
          const double mid = 0.5 * (cell.lo[i] + cell.hi[i]);
          const bool upper_half = (child >> a) & 1U;
          c.lo[i] = upper_half ? mid : cell.lo[i];
          c.hi[i] = upper_half ? cell.hi[i] : mid;
        }
        // Degenerate cells (width underflow) cannot be split further.
        if (c.lo == c.hi) continue;
        c.corner_images.resize(corners);
        for (std::size_t m = 0; m < corners; ++m) {
          std::size_t t = 0;
          std::size_t place = 1;
          for (std::size_t a = 0; a < dim; ++a) {
            t += (((child >> a) & 1U) + ((m >> a) & 1U)) * place;
            place *= 3;
          }
          c.corner_images[m] = li[t];
        }
        if (spread(c.corner_images) > tol) next.push_back(std::move(c));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

std::string_view to_string(EncodingVerdict v) {
  switch (v) {
    case EncodingVerdict::Singleton: return "singleton";
    case EncodingVerdict::NotContracting: return "not-contracting";
    case EncodingVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

DepthImage image_at_depth(const SystemSpec& sys, const InputWindow& window, std::size_t depth,
                          const PointCloudSet& base, const EncodingOptions& options) {
  if (depth > window.size()) throw InvalidArgument("depth exceeds window length");
  validate_window(sys, window);
  for (const auto& p : base.points()) validate_state(sys, p);
  const InputWindow inputs = window.suffix(depth);

  const auto& grid = base.grid();
  const bool can_refine = options.refine && grid.has_value() && grid->box.dim() <= kMaxRefineDim;
  if (!can_refine || depth == 0) {
    std::vector<Vector> images(base.size());
    parallel_for(base.size(), options.threads, [&](std::size_t i) {
      images[i] = process_unchecked(sys, inputs, base.points()[i]);
    });
    return {PointCloudSet(std::move(images), Provenance::Image, options.dedup_tolerance), false};
  }
  const double tol = options.refine_tolerance > 0.0 ? options.refine_tolerance
                                                    : grid->cell_diameter();
  bool saturated = false;
  auto pts = refined_image(sys, inputs, *grid, tol, options, saturated);
  return {PointCloudSet(std::move(pts), Provenance::Image, options.dedup_tolerance), saturated};
}

bool tail_non_shrinking(const std::vector<double>& diameters, std::size_t tail, double relative) {
  if (tail < 2 || diameters.size() < tail) return false;
  const double first = diameters[diameters.size() - tail];
  const double last = diameters.back();
  return (first - last) < relative * first;
}

EncodingVerdict classify_diameters(const std::vector<double>& diameters, double epsilon) {
  if (diameters.empty()) return EncodingVerdict::Inconclusive;
  if (diameters.back() <= epsilon) return EncodingVerdict::Singleton;
  if (tail_non_shrinking(diameters)) return EncodingVerdict::NotContracting;
  return EncodingVerdict::Inconclusive;
}

EncodingResult encoding_approx(const SystemSpec& sys, const InputWindow& window,
                               const PointCloudSet& base, double epsilon_singleton,
                               const EncodingOptions& options) {
  if (window.empty()) throw InvalidArgument("encoding needs a window of length >= 1");
  if (!(epsilon_singleton >= 0.0)) throw InvalidArgument("epsilon must be nonnegative");
  const std::size_t depth = options.depth == 0 ? window.size() : options.depth;
  if (depth > window.size()) throw InvalidArgument("depth exceeds window length");

  EncodingResult r;
  r.epsilon = epsilon_singleton;
  for (std::size_t k = 1; k <= depth; ++k) {
    DepthImage img = image_at_depth(sys, window, k, base, options);
    r.depths.push_back(k);
    r.diameters.push_back(img.set.diameter());
    r.refinement_saturated = r.refinement_saturated || img.saturated;
    if (options.keep_sets || r.sets.empty()) {
      r.sets.push_back(std::move(img.set));
    } else {
      r.sets.back() = std::move(img.set);
    }
    if (options.stop_at_singleton && r.diameters.back() <= epsilon_singleton) break;
  }
  r.verdict = classify_diameters(r.diameters, epsilon_singleton);
  if (r.verdict == EncodingVerdict::Singleton) r.representative = r.final_set().centroid();
  return r;
}

PointCloudSet approx_reachable_set(const SystemSpec& sys, const std::vector<InputWindow>& windows,
                                   const PointCloudSet& base, const EncodingOptions& options) {
  if (windows.empty()) throw InvalidArgument("need at least one input sample");
  std::vector<Vector> all;
  for (const auto& w : windows) {
    if (w.empty()) throw InvalidArgument("input sample windows must be nonempty");
    const std::size_t depth = options.depth == 0 ? w.size() : std::min(options.depth, w.size());
    DepthImage img = image_at_depth(sys, w, depth, base, options);
    all.insert(all.end(), img.set.points().begin(), img.set.points().end());
  }
  return PointCloudSet(std::move(all), Provenance::Union, options.dedup_tolerance);
}

void write_encoding_csv(std::ostream& os, const EncodingResult& result) {
  CsvWriter w(os);
  w.header({"depth[steps]", "diameter[state]", "verdict"});
  std::vector<double> prefix;
  for (std::size_t i = 0; i < result.depths.size(); ++i) {
    prefix.push_back(result.diameters[i]);
    w.cell(result.depths[i]).cell(result.diameters[i]);
    w.cell(to_string(classify_diameters(prefix, result.epsilon)));
    w.end_row();
  }
}

nlohmann::json to_json(const EncodingResult& result) {
  nlohmann::json j;
  j["depths"] = result.depths;
  j["diameters"] = result.diameters;
  j["verdict"] = std::string(to_string(result.verdict));
  j["epsilon_singleton"] = result.epsilon;
  if (result.representative) {
    j["representative"] = std::vector<double>(result.representative->data(),
                                              result.representative->data() +
                                                  result.representative->size());
  } else {
    j["representative"] = nullptr;
  }
  j["final_set_size"] = result.final_set().size();
  j["refinement_saturated"] = result.refinement_saturated;
  return j;
}

}  // namespace drivensys
