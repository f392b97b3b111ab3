#pragma once

// Node-arm sets, the bilinear reward x^T M x' and its linear form
// <vec(x x'^T), vec(M)> over column-stacked d^2 vectors.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "gbb/rng.hpp"

namespace gbb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Finite set of K >= 2 distinct node-arms in R^d, all with norm <= L.
class ArmSet {
 public:
  explicit ArmSet(std::vector<Vector> arms, std::optional<double> norm_bound = std::nullopt);

  int size() const { return static_cast<int>(arms_.size()); }
  int dim() const { return dim_; }
  double norm_bound() const { return norm_bound_; }
  const Vector& operator[](int k) const { return arms_.at(k); }
  const std::vector<Vector>& arms() const { return arms_; }

 private:
  std::vector<Vector> arms_;
  int dim_ = 0;
  double norm_bound_ = 0.0;
};

/// z = vec(x x'^T), column-major, length d^2.
struct EdgeArm {
  Vector z;
};

/// Hidden parameter M* with its column-stacked form theta*, the noise scale
/// and the Frobenius bound S.
class EnvironmentSpec {
 public:
  EnvironmentSpec(Matrix mstar, double sigma, std::optional<double> norm_bound = std::nullopt,
                  std::uint64_t seed = 0);

  int dim() const { return static_cast<int>(mstar_.rows()); }
  const Matrix& mstar() const { return mstar_; }
  const Vector& theta_star() const { return theta_; }
  double sigma() const { return sigma_; }
  double norm_bound() const { return norm_bound_; }
  std::uint64_t seed() const { return seed_; }

  EnvironmentSpec with_sigma(double sigma) const;

 private:
  Matrix mstar_;
  Vector theta_;
  double sigma_;
  double norm_bound_;
  std::uint64_t seed_;
};

EdgeArm vectorize_pair(const Vector& x, const Vector& xp);

double expected_reward(const EdgeArm& z, const EnvironmentSpec& env);

/// <z, theta*> + eta with eta ~ N(0, sigma^2). No draw is consumed when sigma = 0.
double sample_reward(const EdgeArm& z, const EnvironmentSpec& env, Rng& rng);

/// Gaussian noise term on its own, with the same draw discipline as sample_reward.
double sample_noise(const EnvironmentSpec& env, Rng& rng);

ArmSet make_canonical_arms(int d);

/// Entries |g_ij| with g_ij iid N(0,1); S is the exact Frobenius norm.
EnvironmentSpec gen_random_mstar(int d, Rng& rng, double sigma = 0.0, std::uint64_t seed = 0);

/// Ordered pair i != j maximising M[i,j] + M[j,i]; ties go to the
/// lexicographically smallest pair.
std::pair<int, int> best_offdiagonal_pair(const Matrix& m);

/// Sets M[i*,i*] = M[j*,j*] = zeta * (M[i*,j*] + M[j*,i*]) / 2 for the best
/// off-diagonal pair. Requires 0 <= zeta < 1.
EnvironmentSpec apply_zeta_coupling(const EnvironmentSpec& env, double zeta);

/// K x K table of x_a^T M* x_b.
Matrix pair_value_table(const ArmSet& arms, const EnvironmentSpec& env);

/// Throws std::invalid_argument unless 0 <= x^T M* x' <= L S for every pair of arms.
void check_reward_range(const ArmSet& arms, const EnvironmentSpec& env);

nlohmann::json environment_to_json(const EnvironmentSpec& env);
EnvironmentSpec environment_from_json(const nlohmann::json& j);

}  // namespace gbb
