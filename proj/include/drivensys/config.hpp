#pragma once

#include "drivensys/driven_system.hpp"
#include "drivensys/point_cloud.hpp"
#include "drivensys/usp.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace drivensys {

/// How to build the system under study. Matrices are either given
/// explicitly (inline literal or CSV path) or drawn from `seed`.
struct SystemConfig {
  std::string kind = "tanh_esn";

  // tanh_esn
  std::size_t state_dim = 2;
  std::size_t input_dim = 1;
  double alpha = 0.5;
  double input_lower = -1.0;
  double input_upper = 1.0;
  std::uint64_t seed = 1;
  /// "gaussian" (rescaled to recurrent_norm) or "orthogonal" (times recurrent_norm).
  std::string recurrent = "gaussian";
  double recurrent_norm = 1.0;
  double input_gain = 1.0;
  std::optional<Matrix> input_weights;
  std::optional<Matrix> recurrent_matrix;

  // linear_shift
  int delay_order = 1;
  double obs_lower = -1.0;
  double obs_upper = 1.0;
};

/// Seeded A (standard normal times gain) then B, in that draw order.
SystemSpec build_system(const SystemConfig& config);

struct Figure1Config {
  std::size_t state_dim = 100;
  std::size_t input_dim = 1;
  std::size_t steps = 5000;
  std::vector<double> alphas{0.99, 1.05};
  std::uint64_t seed = 7;
  std::string recurrent = "orthogonal";
  double input_gain = 0.01;
  double input_lower = -1.0;
  double input_upper = 1.0;
  /// Coordinates written per step.
  std::size_t tracked = 1;
};

struct TakensConfig {
  std::vector<int> delay_orders{1, 2, 3};
  std::vector<std::string> maps{"logistic", "henon"};
  std::size_t trials = 3;
};

struct GirstConfig {
  /// "upper", "lower", "random" or a number (constant window).
  std::string base = "upper";
  std::string source = "lower";
  std::size_t length = 50;
  std::vector<std::size_t> n_values{5, 10, 15, 20, 25, 30, 35, 40, 45};
  double epsilon = 1e-4;
};

struct ConjugacyConfig {
  std::size_t samples = 100;
  std::size_t depth = 40;
  std::size_t depth_k = 5;
};

struct UapConfig {
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3};
  std::size_t max_shifts = 4;
};

struct EncodeConfig {
  std::string window = "upper";
  std::size_t length = 50;
};

struct RunConfig {
  SystemConfig system;
  EnsembleSpec ensemble;
  double epsilon_singleton = kDefaultSingletonEpsilon;
  double epsilon_refute = kDefaultRefuteEpsilon;
  std::size_t depth_max = 200;
  /// Base grid points per axis; 0 picks a default for the system.
  std::size_t grid = 0;
  std::filesystem::path out_dir = "out";
  unsigned threads = 1;

  Figure1Config figure1;
  TakensConfig takens;
  GirstConfig girst;
  ConjugacyConfig conjugacy;
  UapConfig uap;
  EncodeConfig encode;
};

/// INI-style file: [system], [ensemble], [run], [figure1], [takens], [girst],
/// [conjugacy], [uap], [encode]. Unknown keys are rejected. Relative CSV
/// paths resolve against the file's directory.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(std::istream& is, const std::filesystem::path& base_dir = {});

/// Presets for the shipped systems; unknown names throw InvalidArgument.
SystemConfig preset_system(const std::string& name);

/// Base state-space cloud: a grid of `per_axis` points (or the system
/// default when 0), falling back to a Latin-hypercube sample of 4096 points
/// when the grid would exceed 200000 points.
PointCloudSet default_base_cloud(const SystemSpec& sys, std::size_t per_axis);

/// Window of `length` inputs from a descriptor: "upper"/"lower" box corners,
/// "random" (uniform, seeded) or a number broadcast to every input axis.
InputWindow window_from_spec(const SystemSpec& sys, const std::string& spec, std::size_t length,
                             std::uint64_t seed);

std::vector<double> parse_double_list(const std::string& text);

}  // namespace drivensys
