#include "gbb/oracle.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "gbb/errors.hpp"

namespace gbb {

std::string_view to_string(Provenance p) { return p == Provenance::exact ? "exact" : "surrogate"; }

JointArm optimal_joint_arm(const Graph& g, const ArmSet& arms, const EnvironmentSpec& env, std::uint64_t budget,
                           kernels::Backend backend) {
  const std::uint64_t space = kernels::joint_space_size(arms.size(), g.num_nodes());
  if (space > budget)
    throw BudgetExceeded(fmt::format("exhaustive search over K^n = {}^{} assignments exceeds the budget of {}",
                                     arms.size(), g.num_nodes(), budget));
  const Matrix table = pair_value_table(arms, env);
  auto best = kernels::joint_optimum(table, g.edges(), g.num_nodes(), backend);
  return {std::move(best.assignment), best.value};
}

double pair_value(const Matrix& table, ArmPair pair) {
  return table(pair.first, pair.second) + table(pair.second, pair.first);
}

double weighted_pair_value(const Matrix& table, ArmPair pair, const EdgeCounts& counts) {
  const int x = pair.first;
  const int xp = pair.second;
  return static_cast<double>(counts.m12) * table(x, xp) + static_cast<double>(counts.m21) * table(xp, x) +
         static_cast<double>(counts.m1) * table(x, x) + static_cast<double>(counts.m2) * table(xp, xp);
}

namespace {

template <typename Objective>
ArmPair argmax_pair(int k, Objective&& objective) {
  ArmPair best{0, 0};
  double best_value = objective(best);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const ArmPair p{a, b};
      const double v = objective(p);
      if (v > best_value) {
        best_value = v;
        best = p;
      }
    }
  return best;
}

}  // namespace

ArmPair best_pair(const ArmSet& arms, const EnvironmentSpec& env) {
  const Matrix table = pair_value_table(arms, env);
  return argmax_pair(arms.size(), [&](ArmPair p) { return pair_value(table, p); });
}

ArmPair weighted_best_pair(const ArmSet& arms, const EnvironmentSpec& env, const EdgeCounts& counts) {
  const Matrix table = pair_value_table(arms, env);
  return argmax_pair(arms.size(), [&](ArmPair p) { return weighted_pair_value(table, p, counts); });
}

double compute_delta(const ArmSet& arms, const EnvironmentSpec& env, const EdgeCounts& counts) {
  const Matrix table = pair_value_table(arms, env);
  const ArmPair star = best_pair(arms, env);
  const ArmPair weighted = weighted_best_pair(arms, env, counts);
  return weighted_pair_value(table, weighted, counts) - weighted_pair_value(table, star, counts);
}

double compute_gamma(const ArmSet& arms, const EnvironmentSpec& env, double opt_sum, long m) {
  if (!(opt_sum > 0.0)) throw std::invalid_argument("gamma needs a positive optimal global reward");
  if (m < 1) throw std::invalid_argument("gamma needs m >= 1");
  const Matrix table = pair_value_table(arms, env);
  return table.diagonal().minCoeff() / (opt_sum / static_cast<double>(m));
}

double compute_epsilon(double delta_gap, double opt_sum) {
  if (!(opt_sum > 0.0)) throw std::invalid_argument("epsilon needs a positive optimal global reward");
  return delta_gap / opt_sum;
}

Alphas compute_alphas(double gamma, double epsilon, const EdgeCounts& counts, long m) {
  if (m < 1) throw std::invalid_argument("alphas need m >= 1");
  const double within = static_cast<double>(counts.m1 + counts.m2) / static_cast<double>(m);
  return {0.5 + 0.5 * gamma, 1.0 - (within * (1.0 - gamma) - epsilon)};
}

double alpha_regret_increment(double alpha, double opt_sum, double expected_global) {
  return alpha * opt_sum - expected_global;
}

double pair_value_surrogate(const ArmSet& arms, const EnvironmentSpec& env, long m) {
  const Matrix table = pair_value_table(arms, env);
  return static_cast<double>(m) * 0.5 * pair_value(table, best_pair(arms, env));
}

ProblemConstants compute_problem_constants(const Graph& g, const Partition& partition, const ArmSet& arms,
                                           const EnvironmentSpec& env, std::uint64_t budget, bool allow_surrogate,
                                           kernels::Backend backend) {
  const long m = static_cast<long>(g.num_edges());
  ProblemConstants c;
  c.counts = partition.counts;
  try {
    JointArm joint = optimal_joint_arm(g, arms, env, budget, backend);
    c.opt_sum = joint.opt_sum;
    c.opt_assignment = std::move(joint.assignment);
    c.provenance = Provenance::exact;
  } catch (const BudgetExceeded&) {
    if (!allow_surrogate) throw;
    c.opt_sum = pair_value_surrogate(arms, env, m);
    c.provenance = Provenance::surrogate;
  }
  c.pairs.star = best_pair(arms, env);
  c.pairs.weighted_star = weighted_best_pair(arms, env, c.counts);
  c.delta_gap = compute_delta(arms, env, c.counts);
  c.gamma = compute_gamma(arms, env, c.opt_sum, m);
  c.epsilon = compute_epsilon(c.delta_gap, c.opt_sum);
  const Alphas alphas = compute_alphas(c.gamma, c.epsilon, c.counts, m);
  c.alpha1 = alphas.alpha1;
  c.alpha2 = alphas.alpha2;
  c.gamma_in_range = c.gamma >= 0.0 && c.gamma <= 1.0;
  c.epsilon_in_range = c.epsilon >= 0.0 && c.epsilon <= 0.5;
  return c;
}

nlohmann::json constants_to_json(const ProblemConstants& c) {
  return {
      {"gamma", c.gamma},
      {"epsilon", c.epsilon},
      {"delta_gap", c.delta_gap},
      {"alpha1", c.alpha1},
      {"alpha2", c.alpha2},
      {"opt_sum", c.opt_sum},
      {"opt_assignment", c.opt_assignment},
      {"best_pair", {c.pairs.star.first, c.pairs.star.second}},
      {"weighted_best_pair", {c.pairs.weighted_star.first, c.pairs.weighted_star.second}},
      {"counts", {{"m12", c.counts.m12}, {"m21", c.counts.m21}, {"m1", c.counts.m1}, {"m2", c.counts.m2}}},
      {"provenance", to_string(c.provenance)},
      {"gamma_in_range", c.gamma_in_range},
      {"epsilon_in_range", c.epsilon_in_range},
  };
}

}  // namespace gbb
