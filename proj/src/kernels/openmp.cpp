#include <limits>
#include <stdexcept>

#include <omp.h>

#include "gbb/kernels.hpp"

namespace gbb::kernels::openmp {

JointOptimum joint_optimum(const Eigen::MatrixXd& pair_table, std::span<const Edge> edges, int nodes) {
  const int k = static_cast<int>(pair_table.rows());
  if (k < 1 || nodes < 1) throw std::invalid_argument("joint_optimum needs arms and nodes");
  const std::uint64_t total = joint_space_size(k, nodes);
  if (total == std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("joint space too large");

  double best_value = -std::numeric_limits<double>::infinity();
  std::uint64_t best_index = 0;

#pragma omp parallel
  {
    const auto threads = static_cast<std::uint64_t>(omp_get_num_threads());
    const auto tid = static_cast<std::uint64_t>(omp_get_thread_num());
    const std::uint64_t begin = total * tid / threads;
    const std::uint64_t end = total * (tid + 1) / threads;

    double local_value = -std::numeric_limits<double>::infinity();
    std::uint64_t local_index = begin;
    if (begin < end) {
      std::vector<int> current(nodes, 0);
      std::uint64_t rest = begin;
      for (int pos = nodes - 1; pos >= 0; --pos) {
        current[pos] = static_cast<int>(rest % k);
        rest /= k;
      }
      for (std::uint64_t idx = begin; idx < end; ++idx) {
        const double v = detail::assignment_value(pair_table, edges, current.data());
        if (v > local_value) {
          local_value = v;
          local_index = idx;
        }
        int pos = nodes - 1;
        while (pos >= 0 && current[pos] == k - 1) current[pos--] = 0;
        if (pos >= 0) ++current[pos];
      }
    }
#pragma omp critical(gbb_joint_optimum_merge)
    {
      if (begin < end &&
          (local_value > best_value || (local_value == best_value && local_index < best_index))) {
        best_value = local_value;
        best_index = local_index;
      }
    }
  }

  JointOptimum out;
  out.assignment.assign(nodes, 0);
  std::uint64_t rest = best_index;
  for (int pos = nodes - 1; pos >= 0; --pos) {
    out.assignment[pos] = static_cast<int>(rest % k);
    rest /= k;
  }
  out.value = best_value;
  out.evaluated = total;
  return out;
}

void optimistic_scores(std::span<const SparseVec> candidates, const Eigen::VectorXd& theta,
                       const Eigen::MatrixXd& a_inverse, double radius, std::span<double> out) {
  if (out.size() != candidates.size()) throw std::invalid_argument("score buffer size mismatch");
  const auto count = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < count; ++c)
    out[c] = detail::optimistic_score(candidates[c], theta, a_inverse, radius);
}

}  // namespace gbb::kernels::openmp
