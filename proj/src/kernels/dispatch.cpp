#include <limits>
#include <stdexcept>

#include "gbb/kernels.hpp"

namespace gbb::kernels {

std::string_view to_string(Backend backend) {
  return backend == Backend::serial ? "serial" : "openmp";
}

SparseVec SparseVec::from_dense(const Eigen::VectorXd& v) {
  SparseVec out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) == 0.0) continue;
    out.index.push_back(static_cast<int>(i));
    out.value.push_back(v(i));
  }
  return out;
}

std::uint64_t joint_space_size(int arms, int nodes) {
  if (arms < 1 || nodes < 0) throw std::invalid_argument("joint_space_size needs arms >= 1");
  constexpr auto saturated = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1;
  for (int i = 0; i < nodes; ++i) {
    if (total > saturated / static_cast<std::uint64_t>(arms)) return saturated;
    total *= static_cast<std::uint64_t>(arms);
  }
  return total;
}

JointOptimum joint_optimum(const Eigen::MatrixXd& pair_table, std::span<const Edge> edges, int nodes,
                           Backend backend) {
  if (pair_table.rows() != pair_table.cols()) throw std::invalid_argument("pair table must be square");
  return backend == Backend::serial ? serial::joint_optimum(pair_table, edges, nodes)
                                    : openmp::joint_optimum(pair_table, edges, nodes);
}

void optimistic_scores(std::span<const SparseVec> candidates, const Eigen::VectorXd& theta,
                       const Eigen::MatrixXd& a_inverse, double radius, std::span<double> out, Backend backend) {
  if (backend == Backend::serial) serial::optimistic_scores(candidates, theta, a_inverse, radius, out);
  else openmp::optimistic_scores(candidates, theta, a_inverse, radius, out);
}

std::size_t argmax_first(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of an empty range");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

}  // namespace gbb::kernels
