#pragma once

#include "drivensys/driven_system.hpp"
#include "drivensys/encoding.hpp"
#include "drivensys/point_cloud.hpp"
#include "drivensys/takens.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <utility>
#include <vector>

namespace drivensys {

struct CausalOptions {
  double epsilon_singleton = kDefaultSingletonEpsilon;
  /// Encodings use at most this many of the most recent inputs.
  std::size_t depth_max = 200;
  EncodingOptions encoding;
  unsigned threads = 1;
};

/// Allowed one-step mismatch between two certified h-values.
double residual_budget(double epsilon_singleton);

/// h(u) = representative of the singleton encoding of `window`. Throws
/// NotSingletonError when the encoding at depth min(depth_max, |window|) is
/// wider than epsilon_singleton.
Vector h_value(const SystemSpec& sys, const InputWindow& window, const PointCloudSet& base,
               const CausalOptions& options = {});

/// |g(v, h(u)) - h(u v)|.
double semiconjugacy_residual(const SystemSpec& sys, const InputWindow& window, const Vector& v,
                              const PointCloudSet& base, const CausalOptions& options = {});

/// First k coordinates of H(u) and H(u v), oldest first.
struct CausalMapSample {
  InputWindow window;
  Vector v;
  std::size_t depth_k = 0;
  /// h(r^{k-1} u), ..., h(r u), h(u).
  std::vector<Vector> h_values;
  /// h(r^{k-2} u), ..., h(u), h(u v).
  std::vector<Vector> h_values_appended;
  double residual_semiconj = 0.0;
  double residual_causal = 0.0;
  /// Every coordinate above passed the singleton check (always true for a
  /// returned sample; failures throw).
  std::vector<bool> singleton_certified;
};

/// Compares the truncated H(u) pushed forward by g_v with H(u v). All but the
/// newest coordinate must agree bitwise; a mismatch raises ContractViolation.
CausalMapSample causal_commutativity_residual(const SystemSpec& sys, const InputWindow& window,
                                             const Vector& v, std::size_t depth_k,
                                             const PointCloudSet& base,
                                             const CausalOptions& options = {});

/// max_j |g(u_j, h_values[j]) - h_values[j+1]| along the sample.
double shift_consistency_residual(const SystemSpec& sys, const CausalMapSample& sample);

/// States h(u^m), ..., h(u^n) where u^r = (..., record[r-1]).
struct SolutionSegment {
  std::size_t first = 0;
  std::size_t last = 0;
  std::vector<Vector> states;
  /// |g(record[r], x_r) - x_{r+1}| for r = first .. last-1.
  std::vector<double> step_residuals;

  double max_step_residual() const;
};

/// Throws InsufficientHistoryError when first < warmup or last exceeds the
/// record length.
SolutionSegment solution_segment(const SystemSpec& sys, const std::vector<Vector>& record,
                                 std::size_t warmup, std::size_t first, std::size_t last,
                                 const PointCloudSet& base, const CausalOptions& options = {});

struct InjectivityReport {
  double min_separation = 0.0;
  std::vector<double> separations;
  std::size_t depth_k = 0;
};

/// For each pair, the largest coordinate distance between the truncated H
/// lists. Pairs must have equal length and differ at exactly one index. Only
/// systems with invertible g(., x) are accepted: TanhEsn with square
/// invertible input weights, or LinearShift.
InjectivityReport injectivity_probe(const SystemSpec& sys,
                                    const std::vector<std::pair<InputWindow, InputWindow>>& pairs,
                                    std::size_t depth_k, const PointCloudSet& base,
                                    const CausalOptions& options = {});

/// Pairs (h(u^{n-1}), h(u^n)) for inputs u_n = theta(T^n w0).
struct TwoDelayEmbedding {
  std::vector<std::pair<Vector, Vector>> pairs;
  std::vector<double> inputs;
  /// max_n |pairs[n].second - pairs[n+1].first|.
  double lag_residual = 0.0;
};

/// Throws DomainError if the observed orbit leaves the input box.
TwoDelayEmbedding h2_embed(const SystemSpec& sys, const AutonomousMap& map,
                           const Observable& theta, const PlanePoint& w0,
                           std::size_t orbit_length, std::size_t warmup,
                           const PointCloudSet& base, const CausalOptions& options = {});

/// Smallest distance between two pairs (as points of X x X).
double min_pair_separation(const TwoDelayEmbedding& embedding);

void write_segment_csv(std::ostream& os, const SolutionSegment& segment);
void write_samples_csv(std::ostream& os, const SystemSpec& sys,
                       const std::vector<CausalMapSample>& samples);
nlohmann::json to_json(const InjectivityReport& report);

}  // namespace drivensys
