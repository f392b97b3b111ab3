#include "gbb/policies.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace gbb {

std::string_view to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::oful: return "oful";
    case PolicyKind::improved: return "improved";
    case PolicyKind::etc: return "etc";
  }
  return "unknown";
}

PolicyKind policy_from_string(std::string_view name) {
  if (name == "oful") return PolicyKind::oful;
  if (name == "improved") return PolicyKind::improved;
  if (name == "etc") return PolicyKind::etc;
  throw std::invalid_argument(fmt::format("unknown policy '{}'", name));
}

PairScorer::PairScorer(const ArmSet& arms, const EdgeCounts& weights) : arms_(arms.size()) {
  const int k = arms_;
  std::vector<Vector> z(static_cast<std::size_t>(k * k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) z[a * k + b] = vectorize_pair(arms[a], arms[b]).z;

  dense_.reserve(z.size());
  sparse_.reserve(z.size());
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      Vector v = static_cast<double>(weights.m12) * z[a * k + b] + static_cast<double>(weights.m21) * z[b * k + a] +
                 static_cast<double>(weights.m1) * z[a * k + a] + static_cast<double>(weights.m2) * z[b * k + b];
      sparse_.push_back(kernels::SparseVec::from_dense(v));
      dense_.push_back(std::move(v));
    }
  scores_.resize(dense_.size());
}

PairScorer PairScorer::cut_only(const ArmSet& arms) { return PairScorer(arms, EdgeCounts{1, 1, 0, 0}); }

PairChoice PairScorer::select(const RidgeState& state, const Vector& theta_hat, double radius,
                              kernels::Backend backend) const {
  if (radius < 0.0) throw std::invalid_argument("radius must be non-negative");
  if (theta_hat.size() != dense_.front().size()) throw std::invalid_argument("theta dimension mismatch");
  kernels::optimistic_scores(sparse_, theta_hat, state.a_inverse(), radius, scores_, backend);
  const std::size_t best = kernels::argmax_first(scores_);
  return {static_cast<int>(best) / arms_, static_cast<int>(best) % arms_, scores_[best]};
}

PairChoice PairScorer::select(const RidgeState& state, double radius, kernels::Backend backend) const {
  return select(state, state.theta_hat(), radius, backend);
}

PairChoice select_pair_oful(const RidgeState& state, const ArmSet& arms, double radius) {
  return PairScorer::cut_only(arms).select(state, radius);
}

PairChoice select_pair_improved(const RidgeState& state, const ArmSet& arms, double radius,
                                const EdgeCounts& counts) {
  if (counts.m12 != counts.m21) throw std::invalid_argument("cut counts must satisfy m12 == m21");
  return PairScorer(arms, counts).select(state, radius);
}

std::vector<int> allocate(const Partition& partition, const PairChoice& pair, const Graph& g) {
  if (static_cast<int>(partition.side.size()) != g.num_nodes())
    throw std::invalid_argument("partition does not cover the graph");
  std::vector<int> out(g.num_nodes());
  for (int i = 0; i < g.num_nodes(); ++i) out[i] = partition.side[i] == Side::first ? pair.x : pair.xp;
  return out;
}

std::vector<RoundLog> run_policy(PolicyKind policy, const Graph& g, const ArmSet& arms, const EnvironmentSpec& env,
                                 const RunSettings& settings, const RegretBaseline& baseline, Rng& rng) {
  return run_policy(policy, g, approx_max_cut(g), arms, env, settings, baseline, rng);
}

std::vector<RoundLog> run_policy(PolicyKind policy, const Graph& g, const Partition& partition, const ArmSet& arms,
                                 const EnvironmentSpec& env, const RunSettings& settings,
                                 const RegretBaseline& baseline, Rng& rng) {
  if (settings.horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (arms.dim() != env.dim()) throw std::invalid_argument("arm dimension does not match M*");
  check_reward_range(arms, env);

  const int k = arms.size();
  const int d = arms.dim();
  const long m = static_cast<long>(g.num_edges());
  const ConfidenceParams params{settings.delta, env.sigma(), env.norm_bound(), arms.norm_bound(), m, d};
  params.validate();

  RidgeState state = settings.preload_theta_star ? RidgeState(d * d, settings.lambda, env.theta_star())
                                                 : RidgeState(d * d, settings.lambda);
  const Matrix table = pair_value_table(arms, env);
  std::vector<Vector> edge_arms(static_cast<std::size_t>(k * k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) edge_arms[a * k + b] = vectorize_pair(arms[a], arms[b]).z;

  const PairScorer scorer =
      policy == PolicyKind::improved ? PairScorer(arms, partition.counts) : PairScorer::cut_only(arms);
  const long explore_rounds = policy == PolicyKind::etc ? settings.horizon / 3 : 0;
  std::uniform_int_distribution<int> uniform_pair(0, k * k - 1);
  std::normal_distribution<double> std_normal(0.0, 1.0);
  std::optional<PairChoice> committed;

  std::vector<long> group_count(edge_arms.size(), 0);
  std::vector<double> group_reward(edge_arms.size(), 0.0);
  std::vector<int> touched;

  std::vector<RoundLog> logs;
  logs.reserve(static_cast<std::size_t>(settings.horizon));
  double cum_regret = 0.0;
  double cum_alpha = 0.0;

  for (long t = 1; t <= settings.horizon; ++t) {
    PairChoice pair;
    if (policy == PolicyKind::etc) {
      if (t <= explore_rounds) {
        const int idx = uniform_pair(rng);
        pair = {idx / k, idx % k, 0.0};
      } else {
        // The estimate is frozen at the end of exploration.
        if (!committed) committed = scorer.select(state, 0.0, settings.backend);
        pair = *committed;
      }
    } else {
      const double radius = settings.radius_override ? *settings.radius_override
                                                     : beta_radius(state, params, std::max<long>(t - 1, 1));
      pair = scorer.select(state, radius, settings.backend);
    }

    const std::vector<int> assignment = allocate(partition, pair, g);
    double expected = 0.0;
    double noisy = 0.0;
    for (const Edge& e : g.edges()) {
      const int a = assignment[e.from];
      const int b = assignment[e.to];
      const double mean = table(a, b);
      const double y = env.sigma() > 0.0 ? mean + env.sigma() * std_normal(rng) : mean;
      expected += mean;
      noisy += y;
      const int idx = a * k + b;
      if (group_count[idx]++ == 0) touched.push_back(idx);
      group_reward[idx] += y;
    }
    std::sort(touched.begin(), touched.end());
    for (int idx : touched) {
      state.update_repeated(edge_arms[idx], group_count[idx], group_reward[idx]);
      group_count[idx] = 0;
      group_reward[idx] = 0.0;
    }
    touched.clear();

    cum_regret += baseline.opt_sum - expected;
    cum_alpha += alpha_regret_increment(baseline.alpha, baseline.opt_sum, expected);
    logs.push_back({t, pair, expected, noisy, cum_regret, cum_alpha});
  }
  return logs;
}

}  // namespace gbb
