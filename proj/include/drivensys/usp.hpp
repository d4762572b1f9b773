#pragma once

#include "drivensys/driven_system.hpp"
#include "drivensys/encoding.hpp"
#include "drivensys/point_cloud.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace drivensys {

inline constexpr double kDefaultRefuteEpsilon = 1e-2;

/// How input windows are drawn for certification.
struct EnsembleSpec {
  std::uint64_t seed = 1;
  /// Number of i.i.d. uniform windows.
  std::size_t size = 64;
  std::size_t length = 200;
  /// Prepend one constant window per input-box corner.
  bool corners = true;
};

/// Corner windows first (in Box::corners order), then the random ones.
std::vector<InputWindow> make_ensemble(const SystemSpec& sys, const EnsembleSpec& spec);

enum class UspStatus { CertifiedContractive, Refuted, Inconclusive };

std::string_view to_string(UspStatus s);

struct WindowOutcome {
  EncodingVerdict verdict = EncodingVerdict::Inconclusive;
  double final_diameter = 0.0;
  std::size_t depth = 0;
};

/// Empirical USP verdict over a finite ensemble. A certificate is evidence,
/// not a proof.
struct UspVerdict {
  UspStatus status = UspStatus::Inconclusive;
  std::optional<InputWindow> witness;
  std::optional<std::size_t> witness_index;
  double witness_diameter = 0.0;
  std::size_t ensemble_size = 0;
  std::size_t depth_used = 0;
  double epsilon_singleton = kDefaultSingletonEpsilon;
  double epsilon_refute = kDefaultRefuteEpsilon;
  std::vector<WindowOutcome> outcomes;
};

struct CertifyOptions {
  double epsilon_singleton = kDefaultSingletonEpsilon;
  double epsilon_refute = kDefaultRefuteEpsilon;
  std::size_t depth_max = 200;
  EncodingOptions encoding;
  /// Windows are certified in parallel; encoding.threads is ignored.
  unsigned threads = 1;
};

/// Per window: singleton if the depth_max encoding has diameter <=
/// epsilon_singleton; refuted if it exceeds epsilon_refute and the last ten
/// diameters shrank by under 1%; otherwise inconclusive. The first refuted
/// window in ensemble order becomes the witness.
UspVerdict certify_usp(const SystemSpec& sys, const std::vector<InputWindow>& ensemble,
                       const PointCloudSet& base, const CertifyOptions& options = {});

/// J(eps) for each requested eps: the smallest depth j at which every sampled
/// window and every shifted copy r^s of it has its depth-j image within eps
/// of the deepest-encoding representative.
struct UapRateTable {
  std::vector<double> epsilons;  // descending
  std::vector<std::size_t> depths;
  /// sup over samples of dist(image at depth j, attractor point), j = 1..
  std::vector<double> sup_distance;
  std::size_t depth_max = 0;
  std::size_t shifts = 0;
};

struct UapOptions {
  std::size_t depth_max = 200;
  /// Shifted copies r^1 ... r^max_shifts evaluated per window.
  std::size_t max_shifts = 4;
  EncodingOptions encoding;
  unsigned threads = 1;
};

/// Throws ConvergenceError if some eps is not reached within depth_max.
UapRateTable uap_rate(const SystemSpec& sys, const std::vector<InputWindow>& ensemble,
                      std::vector<double> epsilons, const PointCloudSet& base,
                      const UapOptions& options = {});

struct PowerIterationOptions {
  double tolerance = 1e-10;
  std::size_t max_iterations = 10'000;
  std::uint64_t seed = 0;
};

struct SpectralNorm {
  double value = 0.0;
  std::size_t iterations = 0;
};

/// Largest singular value by power iteration on M^T M from a seeded start.
/// Stops when the Rayleigh quotient changes by <= tolerance (relative).
SpectralNorm spectral_norm(const Matrix& m, const PowerIterationOptions& options = {});

struct SpectralCheck {
  bool sufficient_condition_holds = false;
  double alpha_norm = 0.0;  // alpha * ||B||_2
  double norm = 0.0;        // ||B||_2
};

/// alpha ||B||_2 < 1 is sufficient for the USP of a TanhEsn.
SpectralCheck spectral_norm_check(const SystemSpec& sys, const PowerIterationOptions& options = {});

/// |x_k^a - x_k^b| for k = 1..horizon along two trajectories sharing inputs.
std::vector<double> washout_deviation(const SystemSpec& sys, const std::vector<Vector>& inputs,
                                      const Vector& x0a, const Vector& x0b, std::size_t horizon);

/// Least-squares slope of log(diameter) against depth, over the entries
/// above `floor`. Depth of entry i is i + 1.
double log_diameter_slope(const std::vector<double>& diameters, double floor = 1e-10);

nlohmann::json to_json(const UspVerdict& v);
nlohmann::json to_json(const UapRateTable& t);
void write_uap_csv(std::ostream& os, const UapRateTable& t);

}  // namespace drivensys
