#include "drivensys/config.hpp"

#include "drivensys/io.hpp"
#include "drivensys/random.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace drivensys {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) throw InvalidArgument(key + ": not a number: '" + text + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || t.front() == '-') {
    throw InvalidArgument(key + ": not a nonnegative integer: '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw InvalidArgument(key + ": not a boolean: '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& part : split_csv_line(text)) {
    const std::string t = trim(part);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

Matrix matrix_value(const std::string& key, const std::string& text,
                    const std::filesystem::path& base_dir) {
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(t);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument(key + ": bad matrix literal: " + e.what());
    }
    if (!j.is_array() || j.empty() || !j.front().is_array()) {
      throw InvalidArgument(key + ": matrix literal must be a nonempty list of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto& row = j[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
        throw InvalidArgument(key + ": ragged matrix literal");
      }
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    return m;
  }
  std::filesystem::path p(t);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return read_matrix_csv(p);
}

Matrix scaled_to_norm(Matrix m, double target) {
  const double n = spectral_norm(m).value;
  if (n == 0.0) throw InvalidArgument("cannot rescale a zero matrix");
  return m * (target / n);
}

using Setter = std::function<void(const std::string&)>;
using Section = std::map<std::string, Setter>;

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_double("list", item));
  return out;
}

SystemSpec build_system(const SystemConfig& c) {
  const auto kind = system_kind_from_string(c.kind);
  switch (kind) {
    case SystemKind::RationalSaturating: return SystemSpec::rational_saturating();
    case SystemKind::HalfProduct: return SystemSpec::half_product();
    case SystemKind::LinearShift: return SystemSpec::linear_shift(c.delay_order, c.obs_lower, c.obs_upper);
    case SystemKind::Custom: throw InvalidArgument("custom systems cannot be built from a config");
    case SystemKind::TanhEsn: break;
  }
  if (c.state_dim == 0 || c.input_dim == 0) throw InvalidArgument("ESN dimensions must be positive");
  const auto n = static_cast<Eigen::Index>(c.state_dim);
  const auto k = static_cast<Eigen::Index>(c.input_dim);
  Rng rng(c.seed);
  Matrix a = c.input_weights ? *c.input_weights : Matrix(c.input_gain * standard_normal_matrix(n, k, rng));
  Matrix b;
  if (c.recurrent_matrix) {
    b = *c.recurrent_matrix;
  } else if (c.recurrent == "gaussian") {
    b = scaled_to_norm(standard_normal_matrix(n, n, rng), c.recurrent_norm);
  } else if (c.recurrent == "orthogonal") {
    b = c.recurrent_norm * random_orthogonal(n, rng);
  } else {
    throw InvalidArgument("recurrent must be 'gaussian' or 'orthogonal', got '" + c.recurrent + "'");
  }
  Box input = Box::cube(a.cols(), c.input_lower, c.input_upper);
  return SystemSpec::tanh_esn(std::move(a), std::move(b), c.alpha, std::move(input));
}

SystemConfig preset_system(const std::string& name) {
  SystemConfig c;
  if (name == "tanh_esn" || name == "rational_saturating" || name == "half_product" ||
      name == "linear_shift") {
    c.kind = name;
    return c;
  }
  throw InvalidArgument("unknown system preset '" + name + "'");
}

RunConfig parse_run_config(std::istream& is, const std::filesystem::path& base_dir) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }

  RunConfig rc;
  auto& s = rc.system;
  std::map<std::string, Section> sections;
  sections["system"] = {
      {"kind", [&](const std::string& v) { s.kind = trim(v); }},
      {"state_dim", [&](const std::string& v) { s.state_dim = to_unsigned("state_dim", v); }},
      {"input_dim", [&](const std::string& v) { s.input_dim = to_unsigned("input_dim", v); }},
      {"alpha", [&](const std::string& v) { s.alpha = to_double("alpha", v); }},
      {"input_lower", [&](const std::string& v) { s.input_lower = to_double("input_lower", v); }},
      {"input_upper", [&](const std::string& v) { s.input_upper = to_double("input_upper", v); }},
      {"seed", [&](const std::string& v) { s.seed = to_unsigned("seed", v); }},
      {"recurrent", [&](const std::string& v) { s.recurrent = trim(v); }},
      {"recurrent_norm", [&](const std::string& v) { s.recurrent_norm = to_double("recurrent_norm", v); }},
      {"input_gain", [&](const std::string& v) { s.input_gain = to_double("input_gain", v); }},
      {"A", [&](const std::string& v) { s.input_weights = matrix_value("A", v, base_dir); }},
      {"B", [&](const std::string& v) { s.recurrent_matrix = matrix_value("B", v, base_dir); }},
      {"d", [&](const std::string& v) { s.delay_order = static_cast<int>(to_unsigned("d", v)); }},
      {"obs_lower", [&](const std::string& v) { s.obs_lower = to_double("obs_lower", v); }},
      {"obs_upper", [&](const std::string& v) { s.obs_upper = to_double("obs_upper", v); }},
  };
  sections["ensemble"] = {
      {"seed", [&](const std::string& v) { rc.ensemble.seed = to_unsigned("seed", v); }},
      {"size", [&](const std::string& v) { rc.ensemble.size = to_unsigned("size", v); }},
      {"length", [&](const std::string& v) { rc.ensemble.length = to_unsigned("length", v); }},
      {"corners", [&](const std::string& v) { rc.ensemble.corners = to_bool("corners", v); }},
  };
  sections["run"] = {
      {"epsilon_singleton", [&](const std::string& v) { rc.epsilon_singleton = to_double("epsilon_singleton", v); }},
      {"epsilon_refute", [&](const std::string& v) { rc.epsilon_refute = to_double("epsilon_refute", v); }},
      {"depth_max", [&](const std::string& v) { rc.depth_max = to_unsigned("depth_max", v); }},
      {"grid", [&](const std::string& v) { rc.grid = to_unsigned("grid", v); }},
      {"out_dir", [&](const std::string& v) { rc.out_dir = trim(v); }},
      {"threads", [&](const std::string& v) { rc.threads = static_cast<unsigned>(to_unsigned("threads", v)); }},
  };
  auto& f = rc.figure1;
  sections["figure1"] = {
      {"state_dim", [&](const std::string& v) { f.state_dim = to_unsigned("state_dim", v); }},
      {"input_dim", [&](const std::string& v) { f.input_dim = to_unsigned("input_dim", v); }},
      {"steps", [&](const std::string& v) { f.steps = to_unsigned("steps", v); }},
      {"alphas", [&](const std::string& v) { f.alphas = parse_double_list(v); }},
      {"seed", [&](const std::string& v) { f.seed = to_unsigned("seed", v); }},
      {"recurrent", [&](const std::string& v) { f.recurrent = trim(v); }},
      {"input_gain", [&](const std::string& v) { f.input_gain = to_double("input_gain", v); }},
      {"input_lower", [&](const std::string& v) { f.input_lower = to_double("input_lower", v); }},
      {"input_upper", [&](const std::string& v) { f.input_upper = to_double("input_upper", v); }},
      {"tracked", [&](const std::string& v) { f.tracked = to_unsigned("tracked", v); }},
  };
  sections["takens"] = {
      {"d", [&](const std::string& v) {
         rc.takens.delay_orders.clear();
         for (const auto& x : split_list(v)) rc.takens.delay_orders.push_back(static_cast<int>(to_unsigned("d", x)));
       }},
      {"maps", [&](const std::string& v) { rc.takens.maps = split_list(v); }},
      {"trials", [&](const std::string& v) { rc.takens.trials = to_unsigned("trials", v); }},
  };
  sections["girst"] = {
      {"base", [&](const std::string& v) { rc.girst.base = trim(v); }},
      {"source", [&](const std::string& v) { rc.girst.source = trim(v); }},
      {"length", [&](const std::string& v) { rc.girst.length = to_unsigned("length", v); }},
      {"n_values", [&](const std::string& v) {
         rc.girst.n_values.clear();
         for (const auto& x : split_list(v)) rc.girst.n_values.push_back(to_unsigned("n_values", x));
       }},
      {"epsilon", [&](const std::string& v) { rc.girst.epsilon = to_double("epsilon", v); }},
  };
  sections["conjugacy"] = {
      {"samples", [&](const std::string& v) { rc.conjugacy.samples = to_unsigned("samples", v); }},
      {"depth", [&](const std::string& v) { rc.conjugacy.depth = to_unsigned("depth", v); }},
      {"depth_k", [&](const std::string& v) { rc.conjugacy.depth_k = to_unsigned("depth_k", v); }},
  };
  sections["uap"] = {
      {"epsilons", [&](const std::string& v) { rc.uap.epsilons = parse_double_list(v); }},
      {"max_shifts", [&](const std::string& v) { rc.uap.max_shifts = to_unsigned("max_shifts", v); }},
  };
  sections["encode"] = {
      {"window", [&](const std::string& v) { rc.encode.window = trim(v); }},
      {"length", [&](const std::string& v) { rc.encode.length = to_unsigned("length", v); }},
  };

  for (const auto& [name, section] : tree) {
    const auto it = sections.find(name);
    if (it == sections.end()) throw InvalidArgument("config: unknown section [" + name + "]");
    if (!section.data().empty() && section.empty()) {
      throw InvalidArgument("config: key '" + name + "' outside a section");
    }
    for (const auto& [key, node] : section) {
      const auto setter = it->second.find(key);
      if (setter == it->second.end()) {
        throw InvalidArgument("config: unknown key '" + key + "' in [" + name + "]");
      }
      setter->second(node.data());
    }
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path.string());
  return parse_run_config(in, path.parent_path());
}

PointCloudSet default_base_cloud(const SystemSpec& sys, std::size_t per_axis) {
  const std::size_t dim = sys.state_dim();
  if (per_axis == 0) {
    switch (sys.kind()) {
      case SystemKind::RationalSaturating: per_axis = 801; break;
      case SystemKind::HalfProduct: per_axis = 101; break;
      case SystemKind::LinearShift: per_axis = 3; break;
      default: per_axis = dim <= 2 ? 11 : (dim <= 4 ? 5 : 3); break;
    }
  }
  const double total = std::pow(static_cast<double>(per_axis), static_cast<double>(dim));
  if (total <= 200000.0) return sample_state_space(sys, per_axis);
  SamplingOptions o;
  o.method = SamplingMethod::LatinHypercube;
  o.budget = 4096;
  o.seed = 0;
  return sample_state_space(sys, o);
}

InputWindow window_from_spec(const SystemSpec& sys, const std::string& spec, std::size_t length,
                             std::uint64_t seed) {
  if (length == 0) throw InvalidArgument("window length must be positive");
  const Box& box = sys.input_box();
  if (spec == "upper") return InputWindow::constant(box.upper, length);
  if (spec == "lower") return InputWindow::constant(box.lower, length);
  if (spec == "random") {
    Rng rng(seed);
    std::vector<Vector> values;
    for (std::size_t i = 0; i < length; ++i) values.push_back(uniform_in_box(box, rng));
    return InputWindow(std::move(values));
  }
  const double c = to_double("window", spec);
  const InputWindow w = InputWindow::constant(Vector::Constant(box.lower.size(), c), length);
  validate_window(sys, w);
  return w;
}

}  // namespace drivensys
