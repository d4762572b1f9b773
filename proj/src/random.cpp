#include "drivensys/random.hpp"

namespace drivensys {

Vector uniform_in_box(const Box& box, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector out(box.lower.size());
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    out[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * unit(rng);
  }
  return out;
}

Matrix standard_normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  // Row-major fill so the draw order is easy to reproduce elsewhere.
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = normal(rng);
  }
  return m;
}

Matrix random_orthogonal(Eigen::Index n, Rng& rng) {
  const Matrix g = standard_normal_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace drivensys
