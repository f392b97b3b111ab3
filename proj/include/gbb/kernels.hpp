#pragma once

// Hot loops of the simulator, each with a serial reference and an OpenMP
// version. Both backends return identical results: ties are resolved by the
// smallest index regardless of how the work is split across threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gbb/graph.hpp"

namespace gbb::kernels {

enum class Backend { serial, openmp };

std::string_view to_string(Backend backend);

/// Sparse vector over a fixed dense dimension.
struct SparseVec {
  std::vector<int> index;
  std::vector<double> value;

  static SparseVec from_dense(const Eigen::VectorXd& v);
};

struct JointOptimum {
  std::vector<int> assignment;  // arm index per node
  double value = 0.0;
  std::uint64_t evaluated = 0;
};

/// Number of joint assignments K^n, saturating at UINT64_MAX.
std::uint64_t joint_space_size(int arms, int nodes);

/// Exhaustive max over [0,K)^n of sum_{(i,j) in E} table(a_i, a_j). The
/// first assignment in lexicographic order (node 0 most significant) wins ties.
JointOptimum joint_optimum(const Eigen::MatrixXd& pair_table, std::span<const Edge> edges, int nodes,
                           Backend backend);

/// out[k] = <v_k, theta> + radius * sqrt(v_k^T A^{-1} v_k).
void optimistic_scores(std::span<const SparseVec> candidates, const Eigen::VectorXd& theta,
                       const Eigen::MatrixXd& a_inverse, double radius, std::span<double> out, Backend backend);

/// First index of the maximum.
std::size_t argmax_first(std::span<const double> values);

namespace serial {
JointOptimum joint_optimum(const Eigen::MatrixXd& pair_table, std::span<const Edge> edges, int nodes);
void optimistic_scores(std::span<const SparseVec> candidates, const Eigen::VectorXd& theta,
                       const Eigen::MatrixXd& a_inverse, double radius, std::span<double> out);
}  // namespace serial

namespace openmp {
JointOptimum joint_optimum(const Eigen::MatrixXd& pair_table, std::span<const Edge> edges, int nodes);
void optimistic_scores(std::span<const SparseVec> candidates, const Eigen::VectorXd& theta,
                       const Eigen::MatrixXd& a_inverse, double radius, std::span<double> out);
}  // namespace openmp

// Shared by both backends so per-element arithmetic is bit-identical.
namespace detail {

inline double assignment_value(const Eigen::MatrixXd& table, std::span<const Edge> edges, const int* assignment) {
  double total = 0.0;
  for (const Edge& e : edges) total += table(assignment[e.from], assignment[e.to]);
  return total;
}

inline double optimistic_score(const SparseVec& v, const Eigen::VectorXd& theta, const Eigen::MatrixXd& a_inverse,
                               double radius) {
  double mean = 0.0;
  double quad = 0.0;
  const std::size_t nnz = v.index.size();
  for (std::size_t p = 0; p < nnz; ++p) {
    mean += v.value[p] * theta(v.index[p]);
    double row = 0.0;
    for (std::size_t q = 0; q < nnz; ++q) row += a_inverse(v.index[p], v.index[q]) * v.value[q];
    quad += v.value[p] * row;
  }
  return mean + radius * std::sqrt(std::max(quad, 0.0));
}

}  // namespace detail

}  // namespace gbb::kernels
