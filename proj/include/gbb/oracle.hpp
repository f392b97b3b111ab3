#pragma once

// Ground truth for a problem instance: the optimal joint arm, the best and
// count-weighted best arm pairs, and the constants gamma, epsilon, Delta,
// alpha_1, alpha_2 that set the regret guarantees of the two policies.

#include <cstdint>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gbb/bilinear.hpp"
#include "gbb/graph.hpp"
#include "gbb/kernels.hpp"

namespace gbb {

inline constexpr std::uint64_t kDefaultBruteForceBudget = 10'000'000;

/// Ordered pair of arm indices (x for V1, x' for V2).
struct ArmPair {
  int first = 0;
  int second = 0;
  friend bool operator==(const ArmPair&, const ArmPair&) = default;
};

struct BestPairs {
  ArmPair star;
  ArmPair weighted_star;
};

struct JointArm {
  std::vector<int> assignment;
  double opt_sum = 0.0;
};

/// Exact when the denominators come from exhaustive search; surrogate when
/// they come from the single-pair upper bound, in which case gamma and
/// epsilon are lower bounds.
enum class Provenance { exact, surrogate };
std::string_view to_string(Provenance p);

struct ProblemConstants {
  double gamma = 0.0;
  double epsilon = 0.0;
  double delta_gap = 0.0;
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  double opt_sum = 0.0;
  std::vector<int> opt_assignment;  // empty under the surrogate
  BestPairs pairs;
  EdgeCounts counts;
  Provenance provenance = Provenance::exact;
  bool gamma_in_range = true;    // 0 <= gamma <= 1
  bool epsilon_in_range = true;  // 0 <= epsilon <= 1/2
};

struct Alphas {
  double alpha1 = 0.5;
  double alpha2 = 0.5;
};

/// Exhaustive search over X^n. Throws BudgetExceeded when K^n > budget.
JointArm optimal_joint_arm(const Graph& g, const ArmSet& arms, const EnvironmentSpec& env,
                           std::uint64_t budget = kDefaultBruteForceBudget,
                           kernels::Backend backend = kernels::Backend::openmp);

/// <z_{x x'} + z_{x' x}, theta*> for a pair of arm indices.
double pair_value(const Matrix& table, ArmPair pair);

/// m12 <z_{xx'}> + m21 <z_{x'x}> + m1 <z_{xx}> + m2 <z_{x'x'}> under theta*.
double weighted_pair_value(const Matrix& table, ArmPair pair, const EdgeCounts& counts);

ArmPair best_pair(const ArmSet& arms, const EnvironmentSpec& env);
ArmPair weighted_best_pair(const ArmSet& arms, const EnvironmentSpec& env, const EdgeCounts& counts);

/// Weighted objective at the weighted-best pair minus that at the best pair.
double compute_delta(const ArmSet& arms, const EnvironmentSpec& env, const EdgeCounts& counts);

/// min_x <z_xx, theta*> / (opt_sum / m). Not clamped: callers check the range.
double compute_gamma(const ArmSet& arms, const EnvironmentSpec& env, double opt_sum, long m);

double compute_epsilon(double delta_gap, double opt_sum);

Alphas compute_alphas(double gamma, double epsilon, const EdgeCounts& counts, long m);

/// alpha * opt_sum - expected_global for one round.
double alpha_regret_increment(double alpha, double opt_sum, double expected_global);

/// m/2 * <z_{x* x*'} + z_{x*' x*}, theta*>, an upper bound on opt_sum that is
/// tight on bipartite graphs.
double pair_value_surrogate(const ArmSet& arms, const EnvironmentSpec& env, long m);

/// All constants for one instance. Uses exhaustive search within budget; past
/// the budget either falls back to the surrogate (allow_surrogate) or throws
/// BudgetExceeded.
ProblemConstants compute_problem_constants(const Graph& g, const Partition& partition, const ArmSet& arms,
                                           const EnvironmentSpec& env,
                                           std::uint64_t budget = kDefaultBruteForceBudget,
                                           bool allow_surrogate = false,
                                           kernels::Backend backend = kernels::Backend::openmp);

nlohmann::json constants_to_json(const ProblemConstants& c);

}  // namespace gbb
