#pragma once

// Sequential allocation policies. Each round one ordered arm pair (x, x') is
// chosen, x is played by every node of V1 and x' by every node of V2, and
// all m edge rewards are fed back to the ridge estimate.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gbb/bilinear.hpp"
#include "gbb/estimator.hpp"
#include "gbb/graph.hpp"
#include "gbb/kernels.hpp"
#include "gbb/oracle.hpp"

namespace gbb {

enum class PolicyKind {
  oful,      // optimistic pair on the cut edges only
  improved,  // optimistic pair weighted by m12, m21, m1, m2
  etc,       // explore uniformly for T/3 rounds, then commit
};

std::string_view to_string(PolicyKind p);
PolicyKind policy_from_string(std::string_view name);

struct PairChoice {
  int x = 0;   // arm index for V1
  int xp = 0;  // arm index for V2
  double ucb = 0.0;
};

struct RoundLog {
  long t = 0;
  PairChoice pair;
  double expected_global = 0.0;
  double noisy_global = 0.0;
  double cum_regret = 0.0;
  double cum_alpha_regret = 0.0;
};

/// Optimistic scoring of all K^2 ordered pairs against a fixed weighting of
/// the four edge-arm forms. The candidate vectors are built once.
class PairScorer {
 public:
  PairScorer(const ArmSet& arms, const EdgeCounts& weights);

  /// Weights (1, 1, 0, 0): the plain z_{xx'} + z_{x'x} objective.
  static PairScorer cut_only(const ArmSet& arms);

  PairChoice select(const RidgeState& state, const Vector& theta_hat, double radius,
                    kernels::Backend backend = kernels::Backend::serial) const;
  PairChoice select(const RidgeState& state, double radius,
                    kernels::Backend backend = kernels::Backend::serial) const;

  int num_arms() const { return arms_; }
  const Vector& candidate(int x, int xp) const { return dense_.at(static_cast<std::size_t>(x * arms_ + xp)); }

 private:
  int arms_;
  std::vector<Vector> dense_;
  std::vector<kernels::SparseVec> sparse_;
  mutable std::vector<double> scores_;
};

PairChoice select_pair_oful(const RidgeState& state, const ArmSet& arms, double radius);
PairChoice select_pair_improved(const RidgeState& state, const ArmSet& arms, double radius,
                                const EdgeCounts& counts);

/// Arm index per node: pair.x on V1, pair.xp on V2.
std::vector<int> allocate(const Partition& partition, const PairChoice& pair, const Graph& g);

struct RunSettings {
  long horizon = 1;
  double lambda = 1.0;
  double delta = 0.1;
  std::optional<double> radius_override;  // fixed radius instead of beta_radius
  bool preload_theta_star = false;        // start theta_hat at theta* (test hook)
  kernels::Backend backend = kernels::Backend::serial;
};

/// Reference values the regret columns are measured against.
struct RegretBaseline {
  double opt_sum = 0.0;
  double alpha = 1.0;
};

/// Runs T rounds of one policy. The cut is the ascending-order greedy cut of g.
std::vector<RoundLog> run_policy(PolicyKind policy, const Graph& g, const ArmSet& arms, const EnvironmentSpec& env,
                                 const RunSettings& settings, const RegretBaseline& baseline, Rng& rng);

/// Same, on a caller-provided cut.
std::vector<RoundLog> run_policy(PolicyKind policy, const Graph& g, const Partition& partition, const ArmSet& arms,
                                 const EnvironmentSpec& env, const RunSettings& settings,
                                 const RegretBaseline& baseline, Rng& rng);

}  // namespace gbb
