#include <stdexcept>

#include "gbb/kernels.hpp"

namespace gbb::kernels::serial {

JointOptimum joint_optimum(const Eigen::MatrixXd& pair_table, std::span<const Edge> edges, int nodes) {
  const int k = static_cast<int>(pair_table.rows());
  if (k < 1 || nodes < 1) throw std::invalid_argument("joint_optimum needs arms and nodes");
  std::vector<int> current(nodes, 0);
  JointOptimum best{current, detail::assignment_value(pair_table, edges, current.data()), 1};
  // Odometer over [0,k)^n, last node fastest, so visits are in lexicographic order.
  while (true) {
    int pos = nodes - 1;
    while (pos >= 0 && current[pos] == k - 1) current[pos--] = 0;
    if (pos < 0) break;
    ++current[pos];
    const double v = detail::assignment_value(pair_table, edges, current.data());
    ++best.evaluated;
    if (v > best.value) {
      best.value = v;
      best.assignment = current;
    }
  }
  return best;
}

void optimistic_scores(std::span<const SparseVec> candidates, const Eigen::VectorXd& theta,
                       const Eigen::MatrixXd& a_inverse, double radius, std::span<double> out) {
  if (out.size() != candidates.size()) throw std::invalid_argument("score buffer size mismatch");
  for (std::size_t c = 0; c < candidates.size(); ++c)
    out[c] = detail::optimistic_score(candidates[c], theta, a_inverse, radius);
}

}  // namespace gbb::kernels::serial
