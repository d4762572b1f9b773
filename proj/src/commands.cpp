#include "drivensys/commands.hpp"

#include "drivensys/causal.hpp"
#include "drivensys/encoding.hpp"
#include "drivensys/girst.hpp"
#include "drivensys/io.hpp"
#include "drivensys/parallel.hpp"
#include "drivensys/random.hpp"
#include "drivensys/takens.hpp"
#include "drivensys/usp.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace drivensys {

namespace {

namespace fs = std::filesystem;

class Outputs {
 public:
  explicit Outputs(const RunConfig& config) : dir_(config.out_dir) {}

  template <typename Writer>
  void csv(const std::string& name, Writer&& writer) {
    std::ostringstream os;
    writer(os);
    put(name, os.str());
  }

  void json(const std::string& name, const nlohmann::json& j) { put(name, j.dump(2) + "\n"); }

  CommandResult finish(int code, std::string summary) {
    return {code, std::move(summary), std::move(files_)};
  }

 private:
  void put(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    write_text_file(p, content);
    files_.push_back(p);
  }

  fs::path dir_;
  std::vector<fs::path> files_;
};

EncodingOptions encoding_options(const RunConfig&) {
  EncodingOptions o;
  o.threads = 1;
  return o;
}

nlohmann::json system_json(const SystemSpec& sys) {
  return {{"kind", std::string(to_string(sys.kind()))},
          {"name", sys.name()},
          {"state_dim", sys.state_dim()},
          {"input_dim", sys.input_dim()}};
}

std::vector<std::string> indexed_columns(const std::string& prefix, std::size_t n,
                                         const std::string& unit) {
  std::vector<std::string> cols;
  for (std::size_t i = 0; i < n; ++i) cols.push_back(prefix + std::to_string(i) + "[" + unit + "]");
  return cols;
}

}  // namespace

CommandResult cmd_certify(const RunConfig& c) {
  const SystemSpec sys = build_system(c.system);
  const PointCloudSet base = default_base_cloud(sys, c.grid);
  const auto ensemble = make_ensemble(sys, c.ensemble);
  CertifyOptions opt;
  opt.epsilon_singleton = c.epsilon_singleton;
  opt.epsilon_refute = c.epsilon_refute;
  opt.depth_max = c.depth_max;
  opt.encoding = encoding_options(c);
  opt.threads = c.threads;
  const UspVerdict v = certify_usp(sys, ensemble, base, opt);

  // Diameter history for the witness, or else the widest window.
  std::size_t shown = 0;
  if (v.witness_index) {
    shown = *v.witness_index;
  } else {
    for (std::size_t i = 1; i < v.outcomes.size(); ++i) {
      if (v.outcomes[i].final_diameter > v.outcomes[shown].final_diameter) shown = i;
    }
  }
  EncodingOptions enc = opt.encoding;
  enc.keep_sets = false;
  enc.threads = c.threads;
  const InputWindow w = ensemble[shown].suffix(std::min(c.depth_max, ensemble[shown].size()));
  const EncodingResult r = encoding_approx(sys, w, base, c.epsilon_singleton, enc);

  Outputs out(c);
  nlohmann::json j = to_json(v);
  j["system"] = system_json(sys);
  j["diameters_window"] = shown;
  out.json("verdict.json", j);
  out.csv("encoding_diameters.csv", [&](std::ostream& os) { write_encoding_csv(os, r); });

  const int code = v.status == UspStatus::CertifiedContractive ? kExitOk
                   : v.status == UspStatus::Refuted           ? kExitNegative
                                                              : kExitInconclusive;
  std::string summary = std::string(to_string(v.status));
  if (v.witness) summary += " (witness window " + std::to_string(*v.witness_index) + ")";
  return out.finish(code, summary);
}

CommandResult cmd_uap(const RunConfig& c) {
  const SystemSpec sys = build_system(c.system);
  const PointCloudSet base = default_base_cloud(sys, c.grid);
  const auto ensemble = make_ensemble(sys, c.ensemble);
  UapOptions opt;
  opt.depth_max = c.depth_max;
  opt.max_shifts = c.uap.max_shifts;
  opt.encoding = encoding_options(c);
  opt.threads = c.threads;
  Outputs out(c);
  UapRateTable t;
  try {
    t = uap_rate(sys, ensemble, c.uap.epsilons, base, opt);
  } catch (const ConvergenceError& e) {
    return out.finish(kExitInconclusive, e.what());
  }
  nlohmann::json j = to_json(t);
  j["system"] = system_json(sys);
  out.json("uap_rate.json", j);
  out.csv("uap_rate.csv", [&](std::ostream& os) { write_uap_csv(os, t); });
  std::string summary;
  for (std::size_t i = 0; i < t.epsilons.size(); ++i) {
    summary += (i ? ", " : "") + std::string("J(") + format_number(t.epsilons[i]) +
               ")=" + std::to_string(t.depths[i]);
  }
  return out.finish(kExitOk, summary);
}

CommandResult cmd_encode(const RunConfig& c) {
  const SystemSpec sys = build_system(c.system);
  const PointCloudSet base = default_base_cloud(sys, c.grid);
  const InputWindow full = window_from_spec(sys, c.encode.window, c.encode.length, c.ensemble.seed);
  const InputWindow w = full.suffix(std::min(c.depth_max, full.size()));
  EncodingOptions enc = encoding_options(c);
  enc.keep_sets = false;
  enc.threads = c.threads;
  const EncodingResult r = encoding_approx(sys, w, base, c.epsilon_singleton, enc);

  Outputs out(c);
  out.csv("encoding.csv", [&](std::ostream& os) { write_encoding_csv(os, r); });
  nlohmann::json j = to_json(r);
  j["system"] = system_json(sys);
  j["window"] = c.encode.window;
  out.json("encoding.json", j);
  out.csv("final_set.csv", [&](std::ostream& os) { write_cloud_csv(os, r.final_set()); });
  const int code = r.verdict == EncodingVerdict::Singleton        ? kExitOk
                   : r.verdict == EncodingVerdict::NotContracting ? kExitNegative
                                                                  : kExitInconclusive;
  return out.finish(code, std::string(to_string(r.verdict)) + ", final diameter " +
                              format_number(r.final_diameter()));
}

CommandResult cmd_conjugacy(const RunConfig& c) {
  const SystemSpec sys = build_system(c.system);
  const PointCloudSet base = default_base_cloud(sys, c.grid);
  const auto& cc = c.conjugacy;
  if (cc.samples == 0) throw InvalidArgument("conjugacy needs at least one sample");

  Rng rng(c.ensemble.seed);
  std::vector<InputWindow> windows;
  std::vector<Vector> vs;
  for (std::size_t s = 0; s < cc.samples; ++s) {
    std::vector<Vector> values;
    for (std::size_t k = 0; k < cc.depth; ++k) values.push_back(uniform_in_box(sys.input_box(), rng));
    windows.emplace_back(std::move(values));
    vs.push_back(uniform_in_box(sys.input_box(), rng));
  }

  CausalOptions opt;
  opt.epsilon_singleton = c.epsilon_singleton;
  opt.depth_max = c.depth_max;
  opt.encoding = encoding_options(c);
  Outputs out(c);
  std::vector<CausalMapSample> samples(cc.samples);
  try {
    parallel_for(cc.samples, c.threads, [&](std::size_t s) {
      samples[s] = causal_commutativity_residual(sys, windows[s], vs[s], cc.depth_k, base, opt);
    });
  } catch (const NotSingletonError& e) {
    return out.finish(kExitNegative, std::string("no semi-conjugacy: ") + e.what());
  }

  double semi = 0.0;
  double causal = 0.0;
  double shift = 0.0;
  bool equal = true;
  for (const auto& s : samples) {
    semi = std::max(semi, s.residual_semiconj);
    causal = std::max(causal, s.residual_causal);
    shift = std::max(shift, shift_consistency_residual(sys, s));
    equal = equal && s.residual_causal == s.residual_semiconj;
  }
  const double budget = residual_budget(c.epsilon_singleton);
  const bool ok = causal <= budget && equal;
  out.csv("conjugacy.csv", [&](std::ostream& os) { write_samples_csv(os, sys, samples); });
  nlohmann::json j;
  j["system"] = system_json(sys);
  j["samples"] = cc.samples;
  j["depth"] = cc.depth;
  j["depth_k"] = cc.depth_k;
  j["max_residual_semiconj"] = semi;
  j["max_residual_causal"] = causal;
  j["causal_equals_semiconj"] = equal;
  j["max_shift_consistency"] = shift;
  j["budget"] = budget;
  j["status"] = ok ? "within-budget" : "over-budget";
  out.json("conjugacy.json", j);
  return out.finish(ok ? kExitOk : kExitInconclusive,
                    "max causal residual " + format_number(causal) + " (budget " +
                        format_number(budget) + ")");
}

CommandResult cmd_takens(const RunConfig& c) {
  const auto& tc = c.takens;
  Rng rng(c.ensemble.seed);
  std::uniform_int_distribution<std::size_t> offset(0, 99);

  struct Row {
    std::string map;
    int d;
    std::size_t trial;
    std::size_t start;
    RealizationTrace trace;
  };
  std::vector<Row> rows;
  for (const auto& name : tc.maps) {
    const AutonomousMap map = AutonomousMap::from_name(name);
    const Observable theta = default_observable(map);
    const bool logistic = map.kind() == AutonomousMap::Kind::Logistic;
    const Orbit orbit(map, map.default_seed(), 200);
    for (int d : tc.delay_orders) {
      const SystemSpec sys = build_linear_shift_system(d, logistic ? 0.0 : -1.0, 1.0);
      for (std::size_t t = 0; t < tc.trials; ++t) {
        const std::size_t start = static_cast<std::size_t>(2 * d) + offset(rng);
        const Vector x0 = uniform_in_box(sys.state_box(), rng);
        rows.push_back({name, d, t, start, verify_delay_realization(sys, orbit, start, theta, x0)});
      }
    }
  }

  Outputs out(c);
  bool within = true;
  out.csv("realization.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    w.header({"map", "d[delays]", "trial[index]", "start[steps]", "steps_to_match[steps]", "bound[steps]",
              "match_error[state]"});
    for (const auto& r : rows) {
      const int bound = 2 * r.d + 1;
      within = within && r.trace.steps_to_match <= static_cast<std::size_t>(bound);
      w.cell(r.map).cell(r.d).cell(r.trial).cell(r.start).cell(r.trace.steps_to_match).cell(bound)
          .cell(r.trace.match_error);
      w.end_row();
    }
  });
  return out.finish(within ? kExitOk : kExitNegative,
                    std::to_string(rows.size()) + " trials, " +
                        (within ? "all within 2d+1 steps" : "bound exceeded"));
}

CommandResult cmd_girst(const RunConfig& c) {
  const SystemSpec sys = build_system(c.system);
  const PointCloudSet base_cloud = default_base_cloud(sys, c.grid);
  const auto& gc = c.girst;
  const InputWindow base = window_from_spec(sys, gc.base, gc.length, c.ensemble.seed);
  const InputWindow source = window_from_spec(sys, gc.source, gc.length, c.ensemble.seed + 1);
  GirstOptions opt;
  opt.encoding = encoding_options(c);
  opt.threads = c.threads;
  const GirstProbeReport rep = girst_probe(sys, base, source, gc.n_values, base_cloud, gc.epsilon, opt);

  Outputs out(c);
  out.csv("girst.csv", [&](std::ostream& os) { write_girst_csv(os, rep); });
  nlohmann::json j = to_json(rep);
  j["system"] = system_json(sys);
  j["base"] = gc.base;
  j["source"] = gc.source;
  out.json("girst.json", j);
  const int code = rep.trend == GirstTrend::Converging    ? kExitOk
                   : rep.trend == GirstTrend::BoundedAway ? kExitNegative
                                                          : kExitInconclusive;
  std::string summary(to_string(rep.trend));
  if (rep.trend == GirstTrend::BoundedAway) summary += "(" + format_number(rep.radius) + ")";
  return out.finish(code, summary);
}

CommandResult cmd_figure1(const RunConfig& c) {
  const auto& f = c.figure1;
  if (f.steps == 0) throw InvalidArgument("figure1 needs at least one step");
  if (f.tracked == 0 || f.tracked > f.state_dim) throw InvalidArgument("tracked coordinates out of range");

  SystemConfig sc;
  sc.kind = "tanh_esn";
  sc.state_dim = f.state_dim;
  sc.input_dim = f.input_dim;
  sc.seed = f.seed;
  sc.recurrent = f.recurrent;
  sc.recurrent_norm = 1.0;
  sc.input_gain = f.input_gain;
  sc.input_lower = f.input_lower;
  sc.input_upper = f.input_upper;

  const Box state_box = Box::cube(f.state_dim, -1.0, 1.0);
  const Box input_box = Box::cube(f.input_dim, f.input_lower, f.input_upper);
  Rng input_rng(f.seed + 1);
  std::vector<Vector> inputs;
  inputs.reserve(f.steps);
  for (std::size_t k = 0; k < f.steps; ++k) inputs.push_back(uniform_in_box(input_box, input_rng));
  Rng state_rng(f.seed + 2);
  const Vector xa = uniform_in_box(state_box, state_rng);
  const Vector xb = uniform_in_box(state_box, state_rng);

  Outputs out(c);
  out.csv("input.csv", [&](std::ostream& os) {
    CsvWriter w(os);
    auto cols = std::vector<std::string>{"step[steps]"};
    const auto uc = indexed_columns("u", f.input_dim, "input");
    cols.insert(cols.end(), uc.begin(), uc.end());
    w.header(cols);
    for (std::size_t k = 0; k < f.steps; ++k) {
      w.cell(k + 1).cells(inputs[k]);
      w.end_row();
    }
  });

  constexpr std::size_t kLateFrom = 1000;
  nlohmann::json runs = nlohmann::json::array();
  std::string summary;
  for (double alpha : f.alphas) {
    sc.alpha = alpha;
    const SystemSpec sys = build_system(sc);
    const Trajectory ta = simulate(sys, xa, inputs);
    const Trajectory tb = simulate(sys, xb, inputs);
    std::vector<double> dist(f.steps);
    for (std::size_t k = 0; k < f.steps; ++k) dist[k] = distance(ta.states[k + 1], tb.states[k + 1]);

    out.csv("trajectory_alpha" + format_number(alpha) + ".csv", [&](std::ostream& os) {
      CsvWriter w(os);
      auto cols = std::vector<std::string>{"step[steps]", "u0[input]"};
      for (const auto& name : indexed_columns("a_x", f.tracked, "state")) cols.push_back(name);
      for (const auto& name : indexed_columns("b_x", f.tracked, "state")) cols.push_back(name);
      cols.emplace_back("distance[state]");
      w.header(cols);
      for (std::size_t k = 0; k < f.steps; ++k) {
        w.cell(k + 1).cell(inputs[k][0]);
        for (std::size_t i = 0; i < f.tracked; ++i) w.cell(ta.states[k + 1][static_cast<Eigen::Index>(i)]);
        for (std::size_t i = 0; i < f.tracked; ++i) w.cell(tb.states[k + 1][static_cast<Eigen::Index>(i)]);
        w.cell(dist[k]);
        w.end_row();
      }
    });

    nlohmann::json run;
    run["alpha"] = alpha;
    run["alpha_norm"] = alpha * spectral_norm(sys.recurrent()).value;
    run["final_distance"] = dist.back();
    const auto lock = std::find_if(dist.begin(), dist.end(), [](double d) { return d < 1e-8; });
    run["lock_step"] = lock == dist.end() ? nlohmann::json(nullptr)
                                          : nlohmann::json(static_cast<std::size_t>(lock - dist.begin()) + 1);
    if (f.steps > kLateFrom) {
      run["late_max_distance"] = *std::max_element(dist.begin() + kLateFrom, dist.end());
    } else {
      run["late_max_distance"] = nullptr;
    }
    runs.push_back(run);
    summary += (summary.empty() ? "" : "; ") + std::string("alpha ") + format_number(alpha) +
               ": final distance " + format_number(dist.back());
  }

  nlohmann::json j;
  j["state_dim"] = f.state_dim;
  j["input_dim"] = f.input_dim;
  j["steps"] = f.steps;
  j["seed"] = f.seed;
  j["recurrent"] = f.recurrent;
  j["input_gain"] = f.input_gain;
  j["late_from"] = kLateFrom;
  j["runs"] = std::move(runs);
  out.json("figure1.json", j);
  return out.finish(kExitOk, summary);
}

CommandResult cmd_reachable(const RunConfig& c) {
  const SystemSpec sys = build_system(c.system);
  const PointCloudSet base = default_base_cloud(sys, c.grid);
  auto ensemble = make_ensemble(sys, c.ensemble);
  for (auto& w : ensemble) w = w.suffix(std::min(c.depth_max, w.size()));
  EncodingOptions enc = encoding_options(c);
  enc.threads = c.threads;
  const PointCloudSet reach = approx_reachable_set(sys, ensemble, base, enc);
  Outputs out(c);
  out.csv("reachable.csv", [&](std::ostream& os) { write_cloud_csv(os, reach); });
  return out.finish(kExitOk, std::to_string(reach.size()) + " points, diameter " +
                                 format_number(reach.diameter()));
}

CommandResult run_command(const std::string& name, const RunConfig& config) {
  if (name == "certify") return cmd_certify(config);
  if (name == "uap") return cmd_uap(config);
  if (name == "encode") return cmd_encode(config);
  if (name == "conjugacy") return cmd_conjugacy(config);
  if (name == "takens") return cmd_takens(config);
  if (name == "girst") return cmd_girst(config);
  if (name == "figure1") return cmd_figure1(config);
  if (name == "reachable") return cmd_reachable(config);
  throw InvalidArgument("unknown command '" + name + "'");
}

}  // namespace drivensys
