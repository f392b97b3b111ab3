#include <algorithm>
#include <stdexcept>

#include "doctest.h"
#include "gbb/errors.hpp"
#include "gbb/oracle.hpp"
#include "oracles.hpp"

using namespace gbb;
using doctest::Approx;

namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Graph complete(int n) {
  Rng rng(0);
  return build_graph({GraphFamily::complete}, n, rng);
}

// The running example: complete n=3, M* = [[0,1],[1,0.9]].
const Matrix kM = m2(0, 1, 1, 0.9);

}  // namespace

TEST_CASE("optimal joint arm examples") {
  const ArmSet arms = make_canonical_arms(2);

  const Graph pair(2, {{0, 1}, {1, 0}});
  const JointArm a = optimal_joint_arm(pair, arms, EnvironmentSpec(Matrix::Identity(2, 2), 0.0));
  CHECK(a.assignment == std::vector<int>{0, 0});
  CHECK(a.opt_sum == 2.0);

  const JointArm b = optimal_joint_arm(complete(3), arms, EnvironmentSpec(kM, 0.0));
  CHECK(b.assignment == std::vector<int>{0, 1, 1});
  CHECK(b.opt_sum == Approx(5.8));
}

TEST_CASE("budget refusal") {
  const ArmSet arms = make_canonical_arms(4);
  Rng rng(1);
  const EnvironmentSpec env = gen_random_mstar(4, rng);
  CHECK_THROWS_AS(optimal_joint_arm(complete(6), arms, env, 4095), BudgetExceeded);
  CHECK_NOTHROW(optimal_joint_arm(complete(6), arms, env, 4096));
}

TEST_CASE("best pairs") {
  const ArmSet arms = make_canonical_arms(2);
  CHECK(best_pair(arms, EnvironmentSpec(m2(0, 1, 1, 0), 0.0)) == ArmPair{0, 1});
  CHECK(best_pair(arms, EnvironmentSpec(Matrix::Identity(2, 2), 0.0)) == ArmPair{0, 0});

  const EnvironmentSpec env(kM, 0.0);
  const EdgeCounts counts{2, 2, 2, 0};
  CHECK(best_pair(arms, env) == ArmPair{0, 1});
  CHECK(weighted_best_pair(arms, env, counts) == ArmPair{1, 0});
  const Matrix table = pair_value_table(arms, env);
  CHECK(weighted_pair_value(table, {1, 0}, counts) == Approx(5.8));
  CHECK(weighted_pair_value(table, {0, 1}, counts) == Approx(4.0));
  CHECK(weighted_best_pair(arms, env, {1, 1, 0, 0}) == best_pair(arms, env));
}

TEST_CASE("zero coupling: best pair is the coupled pair unless another diagonal dominates") {
  int off_diagonal = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(s);
    const EnvironmentSpec env = apply_zeta_coupling(gen_random_mstar(10, rng), 0.0);
    const Matrix& m = env.mstar();
    const auto [i, j] = best_offdiagonal_pair(m);
    const ArmPair p = best_pair(make_canonical_arms(10), env);
    if (2 * m.diagonal().maxCoeff() < m(i, j) + m(j, i)) {
      CHECK(p == ArmPair{std::min(i, j), std::max(i, j)});
      ++off_diagonal;
    } else {
      CHECK(p.first == p.second);
      CHECK(p.first != i);
      CHECK(p.first != j);
    }
  }
  CHECK(off_diagonal > 0);
}

TEST_CASE("delta, gamma, epsilon on the running example") {
  const ArmSet arms = make_canonical_arms(2);
  const EnvironmentSpec env(kM, 0.0);
  CHECK(compute_delta(arms, env, {2, 2, 2, 0}) == Approx(1.8));
  CHECK(compute_delta(arms, env, {2, 2, 0, 0}) == 0.0);
  CHECK(compute_gamma(arms, env, 5.8, 6) == 0.0);
  CHECK(compute_epsilon(1.8, 5.8) == Approx(0.3103).epsilon(1e-4));
  CHECK(compute_epsilon(0.0, 5.8) == 0.0);
  CHECK(pair_value_surrogate(arms, env, 6) == Approx(6.0));

  const Graph g = complete(3);
  const ProblemConstants c = compute_problem_constants(g, approx_max_cut(g), arms, env);
  CHECK(c.provenance == Provenance::exact);
  CHECK(c.opt_sum == Approx(5.8));
  CHECK(c.gamma == 0.0);
  CHECK(c.delta_gap == Approx(1.8));
  CHECK(c.epsilon == Approx(1.8 / 5.8));
  CHECK(c.alpha1 == 0.5);
  CHECK(c.alpha2 == Approx(1.0 - (2.0 / 6.0 - 1.8 / 5.8)));

  CHECK_THROWS_AS(compute_gamma(arms, env, 0.0, 6), std::invalid_argument);
  CHECK_THROWS_AS(compute_epsilon(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("gamma is one on a single pair with identity M*") {
  const ArmSet arms = make_canonical_arms(2);
  const EnvironmentSpec env(Matrix::Identity(2, 2), 0.0);
  const Graph pair(2, {{0, 1}, {1, 0}});
  const JointArm j = optimal_joint_arm(pair, arms, env);
  CHECK(compute_gamma(arms, env, j.opt_sum, 2) == 1.0);
}

TEST_CASE("alphas") {
  CHECK(compute_alphas(0.0, 0.0, {5, 5, 3, 3}, 16).alpha1 == 0.5);
  CHECK(compute_alphas(0.4, 0.0, {4, 4, 0, 0}, 8).alpha2 == 1.0);
  const EdgeCounts complete100{2500, 2500, 2450, 2450};
  for (double gamma : {0.0, 0.3, 1.0})
    for (double eps : {0.0, 0.1}) {
      const Alphas a = compute_alphas(gamma, eps, complete100, 9900);
      CHECK(a.alpha1 == Approx(0.5 + 0.5 * gamma));
      CHECK(a.alpha2 == Approx(5000.0 / 9900 + 4900.0 / 9900 * gamma + eps));
      CHECK(a.alpha2 >= a.alpha1 + eps - 1e-12);
    }
}

TEST_CASE("alpha regret increment") {
  CHECK(alpha_regret_increment(1.0, 3.0, 3.0) == 0.0);
  CHECK(alpha_regret_increment(0.5, 10.0, 6.0) == Approx(-1.0));
  CHECK(alpha_regret_increment(1.0, 3.0, 2.0) > 0.0);
}

TEST_CASE("bipartite instances: surrogate is exact and delta is zero") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng(s);
    const Graph g = build_graph({GraphFamily::matching}, 6, rng);
    const ArmSet arms = make_canonical_arms(3);
    const EnvironmentSpec env = gen_random_mstar(3, rng);
    const Partition p = approx_max_cut(g);
    const ProblemConstants c = compute_problem_constants(g, p, arms, env);
    CHECK(c.opt_sum == Approx(pair_value_surrogate(arms, env, static_cast<long>(g.num_edges()))));
    CHECK(c.delta_gap == 0.0);
    CHECK(c.epsilon == 0.0);
  }
}

TEST_CASE("random instances: dominance, ranges and the alpha ordering") {
  for (int trial = 0; trial < 50; ++trial) {
    Rng rng = make_rng(31, {static_cast<std::uint64_t>(trial)});
    const int n = 2 + trial % 5;
    const int d = 2 + trial % 3;
    const Graph g = build_graph({GraphFamily::erdos_renyi, 0.8}, n, rng);
    if (g.num_edges() == 0) continue;
    const ArmSet arms = make_canonical_arms(d);
    const EnvironmentSpec env = gen_random_mstar(d, rng);
    const Partition p = approx_max_cut(g);
    const long m = static_cast<long>(g.num_edges());
    const ProblemConstants c = compute_problem_constants(g, p, arms, env, kDefaultBruteForceBudget, false,
                                                         kernels::Backend::serial);

    const auto naive = testing::naive_joint_optimum(g, arms.arms(), env.mstar());
    CHECK(c.opt_sum == Approx(naive.value).epsilon(1e-12));

    const Matrix& mm = env.mstar();
    const ArmPair star = c.pairs.star;
    const double best_edge = testing::bilinear(arms[star.first], mm, arms[star.second]) +
                             testing::bilinear(arms[star.second], mm, arms[star.first]);
    for (const Edge& e : g.edges()) {
      const auto& xi = arms[c.opt_assignment[e.from]];
      const auto& xj = arms[c.opt_assignment[e.to]];
      CHECK(testing::bilinear(xi, mm, xj) + testing::bilinear(xj, mm, xi) <= best_edge + 1e-12);
    }
    CHECK(pair_value_surrogate(arms, env, m) >= c.opt_sum - 1e-12);
    CHECK(c.delta_gap >= 0.0);
    CHECK(c.gamma >= 0.0);
    CHECK(c.gamma <= 1.0);
    CHECK(c.epsilon >= 0.0);
    CHECK(c.epsilon <= 0.5);
    CHECK(c.alpha1 == 0.5 + 0.5 * c.gamma);
    CHECK(c.alpha2 >= 0.5 - 1e-12);
    if (2 * (c.counts.m1 + c.counts.m2) <= m) CHECK(c.alpha2 >= c.alpha1 + c.epsilon - 1e-12);
  }
}

TEST_CASE("surrogate fallback is labelled") {
  const Graph g = complete(6);
  const ArmSet arms = make_canonical_arms(4);
  Rng rng(3);
  const EnvironmentSpec env = gen_random_mstar(4, rng);
  const Partition p = approx_max_cut(g);
  CHECK_THROWS_AS(compute_problem_constants(g, p, arms, env, 100), BudgetExceeded);
  const ProblemConstants c = compute_problem_constants(g, p, arms, env, 100, true);
  CHECK(c.provenance == Provenance::surrogate);
  CHECK(c.opt_assignment.empty());
  const ProblemConstants exact = compute_problem_constants(g, p, arms, env);
  CHECK(c.gamma <= exact.gamma + 1e-12);
  CHECK(constants_to_json(c)["provenance"] == "surrogate");
}
