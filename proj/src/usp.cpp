#include "drivensys/usp.hpp"

#include "drivensys/io.hpp"
#include "drivensys/parallel.hpp"
#include "drivensys/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>

namespace drivensys {

namespace {

nlohmann::json window_json(const InputWindow& w) {
  auto arr = nlohmann::json::array();
  for (const auto& v : w.values()) arr.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  return arr;
}

}  // namespace

std::vector<InputWindow> make_ensemble(const SystemSpec& sys, const EnsembleSpec& spec) {
  if (spec.length == 0) throw InvalidArgument("ensemble windows need length >= 1");
  std::vector<InputWindow> out;
  if (spec.corners) {
    for (const auto& c : sys.input_box().corners()) out.push_back(InputWindow::constant(c, spec.length));
  }
  Rng rng(spec.seed);
  for (std::size_t i = 0; i < spec.size; ++i) {
    std::vector<Vector> values;
    values.reserve(spec.length);
    for (std::size_t k = 0; k < spec.length; ++k) values.push_back(uniform_in_box(sys.input_box(), rng));
    out.emplace_back(std::move(values));
  }
  if (out.empty()) throw InvalidArgument("ensemble is empty");
  return out;
}

std::string_view to_string(UspStatus s) {
  switch (s) {
    case UspStatus::CertifiedContractive: return "certified-contractive";
    case UspStatus::Refuted: return "refuted";
    case UspStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

UspVerdict certify_usp(const SystemSpec& sys, const std::vector<InputWindow>& ensemble,
                       const PointCloudSet& base, const CertifyOptions& options) {
  if (ensemble.empty()) throw InvalidArgument("ensemble must be nonempty");
  if (!(options.epsilon_singleton < options.epsilon_refute)) {
    throw InvalidArgument("epsilon_singleton must be below epsilon_refute");
  }
  if (options.depth_max == 0) throw InvalidArgument("depth_max must be positive");

  EncodingOptions enc = options.encoding;
  enc.threads = 1;
  enc.keep_sets = false;

  std::vector<WindowOutcome> outcomes(ensemble.size());
  parallel_for(ensemble.size(), options.threads, [&](std::size_t i) {
    const InputWindow& full = ensemble[i];
    if (full.empty()) throw InvalidArgument("ensemble windows must be nonempty");
    const InputWindow w = full.suffix(std::min(options.depth_max, full.size()));
    const std::size_t depth = w.size();
    WindowOutcome& o = outcomes[i];
    o.depth = depth;
    o.final_diameter = image_at_depth(sys, w, depth, base, enc).set.diameter();
    if (o.final_diameter <= options.epsilon_singleton) {
      o.verdict = EncodingVerdict::Singleton;
      return;
    }
    o.verdict = EncodingVerdict::Inconclusive;
    if (o.final_diameter <= options.epsilon_refute || depth < 10) return;
    std::vector<double> tail;
    for (std::size_t k = depth - 9; k < depth; ++k) {
      tail.push_back(image_at_depth(sys, w, k, base, enc).set.diameter());
    }
    tail.push_back(o.final_diameter);
    if (tail_non_shrinking(tail)) o.verdict = EncodingVerdict::NotContracting;
  });

  UspVerdict v;
  v.ensemble_size = ensemble.size();
  v.epsilon_singleton = options.epsilon_singleton;
  v.epsilon_refute = options.epsilon_refute;
  v.depth_used = 0;
  bool all_singleton = true;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    v.depth_used = std::max(v.depth_used, outcomes[i].depth);
    if (outcomes[i].verdict != EncodingVerdict::Singleton) all_singleton = false;
    if (outcomes[i].verdict == EncodingVerdict::NotContracting && !v.witness) {
      v.witness = ensemble[i].suffix(outcomes[i].depth);
      v.witness_index = i;
      v.witness_diameter = outcomes[i].final_diameter;
    }
  }
  v.status = v.witness ? UspStatus::Refuted
                       : (all_singleton ? UspStatus::CertifiedContractive : UspStatus::Inconclusive);
  v.outcomes = std::move(outcomes);
  return v;
}

UapRateTable uap_rate(const SystemSpec& sys, const std::vector<InputWindow>& ensemble,
                      std::vector<double> epsilons, const PointCloudSet& base,
                      const UapOptions& options) {
  if (ensemble.empty()) throw InvalidArgument("ensemble must be nonempty");
  if (epsilons.empty()) throw InvalidArgument("need at least one epsilon");
  if (options.depth_max == 0) throw InvalidArgument("depth_max must be positive");
  std::sort(epsilons.begin(), epsilons.end(), std::greater<>());

  // (window, shift) jobs in fixed order.
  struct Job {
    std::size_t window;
    std::size_t shift;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    for (std::size_t s = 0; s <= options.max_shifts && s < ensemble[i].size(); ++s) {
      jobs.push_back({i, s});
    }
  }

  EncodingOptions enc = options.encoding;
  enc.threads = 1;
  enc.keep_sets = true;
  enc.stop_at_singleton = false;

  std::vector<std::vector<double>> per_job(jobs.size());
  parallel_for(jobs.size(), options.threads, [&](std::size_t j) {
    const InputWindow shifted = ensemble[jobs[j].window].shift_right(jobs[j].shift);
    const InputWindow w = shifted.suffix(std::min(options.depth_max, shifted.size()));
    const EncodingResult r = encoding_approx(sys, w, base, 0.0, enc);
    const PointCloudSet attractor = PointCloudSet::singleton(r.final_set().centroid());
    auto& d = per_job[j];
    d.reserve(r.sets.size());
    for (const auto& set : r.sets) d.push_back(hausdorff_semidistance(set, attractor));
  });

  UapRateTable t;
  t.epsilons = epsilons;
  t.depth_max = options.depth_max;
  t.shifts = options.max_shifts;
  for (const auto& d : per_job) {
    if (t.sup_distance.size() < d.size()) t.sup_distance.resize(d.size(), 0.0);
    for (std::size_t k = 0; k < d.size(); ++k) t.sup_distance[k] = std::max(t.sup_distance[k], d[k]);
  }
  for (double eps : epsilons) {
    std::size_t found = 0;
    for (std::size_t k = 0; k < t.sup_distance.size(); ++k) {
      if (t.sup_distance[k] <= eps) {
        found = k + 1;
        break;
      }
    }
    if (found == 0) {
      throw ConvergenceError("uniform attraction to within " + format_number(eps) +
                             " not reached by depth " + std::to_string(options.depth_max));
    }
    t.depths.push_back(found);
  }
  return t;
}

SpectralNorm spectral_norm(const Matrix& m, const PowerIterationOptions& options) {
  if (m.size() == 0) throw InvalidArgument("spectral norm of an empty matrix");
  Rng rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(m.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(rng);
  v.normalize();

  double lambda = 0.0;
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    const Vector mv = m * v;
    Vector w = m.transpose() * mv;
    const double next = mv.squaredNorm();  // Rayleigh quotient of M^T M at unit v
    const double wn = w.norm();
    if (wn == 0.0) return {0.0, it};  // v in the null space; M^T M v = 0
    if (it > 1 && std::abs(next - lambda) <= options.tolerance * std::max(next, 1e-300)) {
      return {std::sqrt(next), it};
    }
    lambda = next;
    v = w / wn;
  }
  throw ConvergenceError("power iteration did not converge in " +
                         std::to_string(options.max_iterations) + " iterations");
}

SpectralCheck spectral_norm_check(const SystemSpec& sys, const PowerIterationOptions& options) {
  if (sys.kind() != SystemKind::TanhEsn) throw InvalidArgument("spectral check needs a TanhEsn");
  SpectralCheck c;
  c.norm = spectral_norm(sys.recurrent(), options).value;
  c.alpha_norm = sys.alpha() * c.norm;
  c.sufficient_condition_holds = c.alpha_norm < 1.0;
  return c;
}

std::vector<double> washout_deviation(const SystemSpec& sys, const std::vector<Vector>& inputs,
                                      const Vector& x0a, const Vector& x0b, std::size_t horizon) {
  if (inputs.size() < horizon) throw InvalidArgument("input stream shorter than horizon");
  validate_state(sys, x0a);
  validate_state(sys, x0b);
  std::vector<double> trace;
  trace.reserve(horizon);
  Vector a = x0a;
  Vector b = x0b;
  Vector next(a.size());
  for (std::size_t k = 0; k < horizon; ++k) {
    if (!sys.input_box().contains(inputs[k])) throw DomainError("input outside the input box");
    sys.map_into(inputs[k], a, next);
    a.swap(next);
    sys.map_into(inputs[k], b, next);
    b.swap(next);
    trace.push_back(distance(a, b));
  }
  return trace;
}

double log_diameter_slope(const std::vector<double>& diameters, double floor) {
  double n = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < diameters.size(); ++i) {
    if (!(diameters[i] > floor)) continue;
    const double x = static_cast<double>(i + 1);
    const double y = std::log(diameters[i]);
    n += 1.0;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (n < 2.0 || denom <= 0.0) throw InvalidArgument("need two diameters above the floor");
  return (n * sxy - sx * sy) / denom;
}

nlohmann::json to_json(const UspVerdict& v) {
  nlohmann::json j;
  j["status"] = std::string(to_string(v.status));
  j["ensemble_size"] = v.ensemble_size;
  j["depth_used"] = v.depth_used;
  j["epsilon_singleton"] = v.epsilon_singleton;
  j["epsilon_refute"] = v.epsilon_refute;
  if (v.witness) {
    j["witness"] = {{"index", *v.witness_index},
                    {"final_diameter", v.witness_diameter},
                    {"window", window_json(*v.witness)}};
  } else {
    j["witness"] = nullptr;
  }
  auto outcomes = nlohmann::json::array();
  for (const auto& o : v.outcomes) {
    outcomes.push_back({{"verdict", std::string(to_string(o.verdict))},
                        {"final_diameter", o.final_diameter},
                        {"depth", o.depth}});
  }
  j["windows"] = std::move(outcomes);
  return j;
}

nlohmann::json to_json(const UapRateTable& t) {
  nlohmann::json j;
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < t.epsilons.size(); ++i) {
    rows.push_back({{"epsilon", t.epsilons[i]}, {"J", t.depths[i]}});
  }
  j["rates"] = std::move(rows);
  j["depth_max"] = t.depth_max;
  j["shifts"] = t.shifts;
  j["sup_distance"] = t.sup_distance;
  return j;
}

void write_uap_csv(std::ostream& os, const UapRateTable& t) {
  CsvWriter w(os);
  w.header({"epsilon[state]", "J[steps]"});
  for (std::size_t i = 0; i < t.epsilons.size(); ++i) {
    w.cell(t.epsilons[i]).cell(t.depths[i]);
    w.end_row();
  }
}

}  // namespace drivensys
