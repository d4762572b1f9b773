#pragma once

#include "drivensys/config.hpp"
#include "drivensys/driven_system.hpp"
#include "drivensys/random.hpp"

#include <cmath>
#include <vector>

namespace testing {

using drivensys::InputWindow;
using drivensys::Vector;

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

/// Gaussian-B ESN with alpha * ||B||_2 = contraction.
inline drivensys::SystemSpec contracting_esn(std::uint64_t seed, std::size_t n,
                                             double contraction = 0.5, std::size_t k = 1) {
  drivensys::SystemConfig c;
  c.kind = "tanh_esn";
  c.state_dim = n;
  c.input_dim = k;
  c.seed = seed;
  c.alpha = contraction;
  c.recurrent_norm = 1.0;
  return drivensys::build_system(c);
}

inline InputWindow random_window(const drivensys::SystemSpec& sys, std::size_t length,
                                 drivensys::Rng& rng) {
  std::vector<Vector> v;
  for (std::size_t i = 0; i < length; ++i) v.push_back(drivensys::uniform_in_box(sys.input_box(), rng));
  return InputWindow(std::move(v));
}

inline std::vector<drivensys::SystemSpec> shipped_systems() {
  return {drivensys::SystemSpec::rational_saturating(), drivensys::SystemSpec::half_product(),
          drivensys::SystemSpec::linear_shift(1), drivensys::SystemSpec::linear_shift(2),
          contracting_esn(3, 3), contracting_esn(4, 2, 0.99)};
}

}  // namespace testing
