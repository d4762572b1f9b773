#include "drivensys/causal.hpp"

#include "drivensys/io.hpp"
#include "drivensys/parallel.hpp"

#include <Eigen/LU>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <limits>
#include <ostream>

namespace drivensys {

namespace {

std::vector<std::string> state_columns(std::size_t n) {
  std::vector<std::string> cols;
  for (std::size_t i = 0; i < n; ++i) cols.push_back("x" + std::to_string(i) + "[state]");
  return cols;
}

// Truncated H list h(r^{k-1} w), ..., h(w).
std::vector<Vector> causal_list(const SystemSpec& sys, const InputWindow& w, std::size_t k,
                                const PointCloudSet& base, const CausalOptions& options) {
  if (w.size() < k) throw InvalidArgument("window shorter than depth_k");
  std::vector<Vector> out(k);
  for (std::size_t j = 0; j < k; ++j) out[k - 1 - j] = h_value(sys, w.shift_right(j), base, options);
  return out;
}

bool bitwise_equal(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

double residual_budget(double epsilon_singleton) {
  return 2.0 * epsilon_singleton + 10.0 * std::numeric_limits<double>::epsilon();
}

Vector h_value(const SystemSpec& sys, const InputWindow& window, const PointCloudSet& base,
               const CausalOptions& options) {
  if (window.empty()) throw InvalidArgument("h needs a nonempty window");
  const InputWindow w = window.suffix(std::min(options.depth_max, window.size()));
  validate_window(sys, w);
  EncodingOptions enc = options.encoding;
  enc.keep_sets = false;
  const DepthImage image = image_at_depth(sys, w, w.size(), base, enc);
  const double diam = image.set.diameter();
  if (diam > options.epsilon_singleton) {
    throw NotSingletonError("encoding at depth " + std::to_string(w.size()) + " has diameter " +
                                format_number(diam) + " > " +
                                format_number(options.epsilon_singleton),
                            diam);
  }
  return image.set.centroid();
}

double semiconjugacy_residual(const SystemSpec& sys, const InputWindow& window, const Vector& v,
                              const PointCloudSet& base, const CausalOptions& options) {
  const Vector lhs = step(sys, v, h_value(sys, window, base, options));
  const Vector rhs = h_value(sys, window.append(v), base, options);
  return distance(lhs, rhs);
}

CausalMapSample causal_commutativity_residual(const SystemSpec& sys, const InputWindow& window,
                                             const Vector& v, std::size_t depth_k,
                                             const PointCloudSet& base,
                                             const CausalOptions& options) {
  if (depth_k == 0) throw InvalidArgument("depth_k must be positive");
  CausalMapSample s;
  s.window = window;
  s.v = v;
  s.depth_k = depth_k;
  s.h_values = causal_list(sys, window, depth_k, base, options);
  s.h_values_appended = causal_list(sys, window.append(v), depth_k, base, options);
  s.singleton_certified.assign(depth_k, true);

  // g~_v shifts the list and appends g_v of the newest entry.
  double residual = 0.0;
  for (std::size_t j = 0; j + 1 < depth_k; ++j) {
    if (!bitwise_equal(s.h_values[j + 1], s.h_values_appended[j])) {
      throw ContractViolation("shifted H coordinates differ at position " + std::to_string(j));
    }
  }
  const Vector pushed = step(sys, v, s.h_values.back());
  residual = distance(pushed, s.h_values_appended.back());
  s.residual_semiconj = residual;
  s.residual_causal = residual;
  return s;
}

double shift_consistency_residual(const SystemSpec& sys, const CausalMapSample& sample) {
  double worst = 0.0;
  const std::size_t k = sample.h_values.size();
  for (std::size_t j = 0; j + 1 < k; ++j) {
    // The input between h(r^{k-1-j} u) and h(r^{k-2-j} u) is u at lag k-1-j.
    const Vector& u = sample.window.at_lag(k - 1 - j);
    worst = std::max(worst, distance(step(sys, u, sample.h_values[j]), sample.h_values[j + 1]));
  }
  return worst;
}

double SolutionSegment::max_step_residual() const {
  double worst = 0.0;
  for (double r : step_residuals) worst = std::max(worst, r);
  return worst;
}

SolutionSegment solution_segment(const SystemSpec& sys, const std::vector<Vector>& record,
                                 std::size_t warmup, std::size_t first, std::size_t last,
                                 const PointCloudSet& base, const CausalOptions& options) {
  if (first > last) throw InvalidArgument("segment range is empty");
  if (warmup == 0) throw InvalidArgument("warmup must be positive");
  if (first < warmup) {
    throw InsufficientHistoryError("index " + std::to_string(first) + " has fewer than " +
                                   std::to_string(warmup) + " inputs before it");
  }
  if (last > record.size()) throw InsufficientHistoryError("input record ends before the segment");

  SolutionSegment seg;
  seg.first = first;
  seg.last = last;
  seg.states.resize(last - first + 1);
  CausalOptions inner = options;
  inner.encoding.threads = 1;
  parallel_for(seg.states.size(), options.threads, [&](std::size_t i) {
    const std::size_t r = first + i;
    const std::size_t len = std::min(r, options.depth_max);
    InputWindow w(std::vector<Vector>(record.begin() + static_cast<std::ptrdiff_t>(r - len),
                                      record.begin() + static_cast<std::ptrdiff_t>(r)));
    seg.states[i] = h_value(sys, w, base, inner);
  });
  for (std::size_t r = first; r < last; ++r) {
    const Vector next = sys.map(record[r], seg.states[r - first]);
    seg.step_residuals.push_back(distance(next, seg.states[r - first + 1]));
  }
  return seg;
}

InjectivityReport injectivity_probe(const SystemSpec& sys,
                                    const std::vector<std::pair<InputWindow, InputWindow>>& pairs,
                                    std::size_t depth_k, const PointCloudSet& base,
                                    const CausalOptions& options) {
  if (sys.kind() == SystemKind::TanhEsn) {
    const Matrix& a = sys.input_weights();
    if (a.rows() != a.cols() || !Eigen::FullPivLU<Matrix>(a).isInvertible()) {
      throw InvalidArgument("injectivity probe needs square invertible input weights");
    }
  } else if (sys.kind() != SystemKind::LinearShift) {
    throw InvalidArgument("injectivity probe supports TanhEsn and LinearShift only");
  }
  if (pairs.empty()) throw InvalidArgument("no window pairs given");
  for (const auto& [a, b] : pairs) {
    if (a.size() != b.size()) throw InvalidArgument("paired windows differ in length");
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff += a[i] == b[i] ? 0 : 1;
    if (diff > 1) throw InvalidArgument("paired windows must differ at one index at most");
  }

  InjectivityReport rep;
  rep.depth_k = depth_k;
  rep.separations.resize(pairs.size());
  CausalOptions inner = options;
  inner.encoding.threads = 1;
  parallel_for(pairs.size(), options.threads, [&](std::size_t p) {
    const auto ha = causal_list(sys, pairs[p].first, depth_k, base, inner);
    const auto hb = causal_list(sys, pairs[p].second, depth_k, base, inner);
    double sep = 0.0;
    for (std::size_t j = 0; j < depth_k; ++j) sep = std::max(sep, distance(ha[j], hb[j]));
    rep.separations[p] = sep;
  });
  rep.min_separation = *std::min_element(rep.separations.begin(), rep.separations.end());
  return rep;
}

TwoDelayEmbedding h2_embed(const SystemSpec& sys, const AutonomousMap& map,
                           const Observable& theta, const PlanePoint& w0,
                           std::size_t orbit_length, std::size_t warmup,
                           const PointCloudSet& base, const CausalOptions& options) {
  if (sys.input_dim() != 1) throw InvalidArgument("scalar observable needs a 1-D input box");
  if (orbit_length == 0 || warmup == 0) throw InvalidArgument("orbit_length and warmup must be positive");
  const Orbit orbit(map, w0, warmup + orbit_length);
  TwoDelayEmbedding emb;
  std::vector<Vector> record;
  record.reserve(orbit.size());
  for (std::size_t n = 0; n < orbit.size(); ++n) {
    const double u = theta(orbit[n]);
    if (!sys.input_box().contains(scalar(u))) {
      throw DomainError("observed orbit leaves the input box at n = " + std::to_string(n));
    }
    emb.inputs.push_back(u);
    record.push_back(scalar(u));
  }
  const SolutionSegment seg =
      solution_segment(sys, record, warmup, warmup, warmup + orbit_length, base, options);
  for (std::size_t n = 0; n + 1 < seg.states.size(); ++n) {
    emb.pairs.emplace_back(seg.states[n], seg.states[n + 1]);
  }
  for (std::size_t n = 0; n + 1 < emb.pairs.size(); ++n) {
    emb.lag_residual = std::max(emb.lag_residual, distance(emb.pairs[n].second, emb.pairs[n + 1].first));
  }
  return emb;
}

double min_pair_separation(const TwoDelayEmbedding& embedding) {
  double best = std::numeric_limits<double>::infinity();
  const auto& p = embedding.pairs;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const double d2 = (p[i].first - p[j].first).squaredNorm() +
                        (p[i].second - p[j].second).squaredNorm();
      best = std::min(best, d2);
    }
  }
  return std::sqrt(best);
}

void write_segment_csv(std::ostream& os, const SolutionSegment& segment) {
  CsvWriter w(os);
  auto cols = std::vector<std::string>{"index[steps]"};
  const auto sc = state_columns(segment.states.empty() ? 0 : segment.states.front().size());
  cols.insert(cols.end(), sc.begin(), sc.end());
  cols.emplace_back("step_residual[state]");
  w.header(cols);
  for (std::size_t i = 0; i < segment.states.size(); ++i) {
    w.cell(segment.first + i).cells(segment.states[i]);
    if (i < segment.step_residuals.size()) {
      w.cell(segment.step_residuals[i]);
    } else {
      w.cell(std::string_view{});
    }
    w.end_row();
  }
}

void write_samples_csv(std::ostream& os, const SystemSpec& sys,
                       const std::vector<CausalMapSample>& samples) {
  CsvWriter w(os);
  w.header({"sample[index]", "depth_k[steps]", "residual_semiconj[state]", "residual_causal[state]",
            "shift_consistency[state]"});
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    w.cell(i).cell(s.depth_k).cell(s.residual_semiconj).cell(s.residual_causal)
        .cell(shift_consistency_residual(sys, s));
    w.end_row();
  }
}

nlohmann::json to_json(const InjectivityReport& report) {
  nlohmann::json j;
  j["depth_k"] = report.depth_k;
  j["min_separation"] = report.min_separation;
  j["separations"] = report.separations;
  return j;
}

}  // namespace drivensys
