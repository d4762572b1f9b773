#pragma once

#include "drivensys/common.hpp"

#include <cstdint>
#include <random>

namespace drivensys {

using Rng = std::mt19937_64;

Vector uniform_in_box(const Box& box, Rng& rng);
Matrix standard_normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);
/// Q factor of a standard normal matrix with the signs of diag(R) folded in,
/// i.e. Haar-distributed on O(n).
Matrix random_orthogonal(Eigen::Index n, Rng& rng);

}  // namespace drivensys
