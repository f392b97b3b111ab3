#include "gbb/bilinear.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace gbb {

ArmSet::ArmSet(std::vector<Vector> arms, std::optional<double> norm_bound) : arms_(std::move(arms)) {
  if (arms_.size() < 2) throw std::invalid_argument("arm set needs at least two arms");
  dim_ = static_cast<int>(arms_.front().size());
  if (dim_ < 1) throw std::invalid_argument("arms must have positive dimension");
  double max_norm = 0.0;
  for (std::size_t k = 0; k < arms_.size(); ++k) {
    if (arms_[k].size() != dim_) throw std::invalid_argument("arms have mixed dimensions");
    max_norm = std::max(max_norm, arms_[k].norm());
    for (std::size_t l = 0; l < k; ++l)
      if (arms_[l] == arms_[k]) throw std::invalid_argument(fmt::format("arms {} and {} coincide", l, k));
  }
  norm_bound_ = norm_bound.value_or(max_norm);
  if (max_norm > norm_bound_ * (1.0 + 1e-12))
    throw std::invalid_argument(fmt::format("arm norm {} exceeds bound L = {}", max_norm, norm_bound_));
}

EnvironmentSpec::EnvironmentSpec(Matrix mstar, double sigma, std::optional<double> norm_bound, std::uint64_t seed)
    : mstar_(std::move(mstar)), sigma_(sigma), seed_(seed) {
  if (mstar_.rows() != mstar_.cols() || mstar_.rows() < 1) throw std::invalid_argument("M* must be square");
  if (!(sigma_ >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  theta_ = Eigen::Map<const Vector>(mstar_.data(), mstar_.size());  // Eigen storage is column-major
  const double frob = mstar_.norm();
  norm_bound_ = norm_bound.value_or(frob);
  if (frob > norm_bound_ * (1.0 + 1e-12))
    throw std::invalid_argument(fmt::format("||M*||_F = {} exceeds S = {}", frob, norm_bound_));
}

EnvironmentSpec EnvironmentSpec::with_sigma(double sigma) const {
  return EnvironmentSpec(mstar_, sigma, norm_bound_, seed_);
}

EdgeArm vectorize_pair(const Vector& x, const Vector& xp) {
  if (x.size() != xp.size()) throw std::invalid_argument("arm dimensions differ");
  const Eigen::Index d = x.size();
  EdgeArm out{Vector(d * d)};
  for (Eigen::Index col = 0; col < d; ++col) out.z.segment(col * d, d) = x * xp(col);
  return out;
}

double expected_reward(const EdgeArm& z, const EnvironmentSpec& env) {
  if (z.z.size() != env.theta_star().size()) throw std::invalid_argument("edge-arm dimension mismatch");
  return z.z.dot(env.theta_star());
}

double sample_noise(const EnvironmentSpec& env, Rng& rng) {
  if (env.sigma() == 0.0) return 0.0;
  std::normal_distribution<double> normal(0.0, env.sigma());
  return normal(rng);
}

double sample_reward(const EdgeArm& z, const EnvironmentSpec& env, Rng& rng) {
  return expected_reward(z, env) + sample_noise(env, rng);
}

ArmSet make_canonical_arms(int d) {
  if (d < 2) throw std::invalid_argument("canonical arm set needs d >= 2");
  std::vector<Vector> arms;
  arms.reserve(d);
  for (int k = 0; k < d; ++k) arms.push_back(Vector::Unit(d, k));
  return ArmSet(std::move(arms), 1.0);
}

EnvironmentSpec gen_random_mstar(int d, Rng& rng, double sigma, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("M* needs d >= 2");
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(d, d);
  // Row-major fill so the draw order matches the JSON layout.
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = std::abs(normal(rng));
  return EnvironmentSpec(std::move(m), sigma, std::nullopt, seed);
}

std::pair<int, int> best_offdiagonal_pair(const Matrix& m) {
  const int d = static_cast<int>(m.rows());
  if (d < 2) throw std::invalid_argument("need d >= 2 for an off-diagonal pair");
  std::pair<int, int> best{0, 1};
  double best_value = m(0, 1) + m(1, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const double v = m(i, j) + m(j, i);
      if (v > best_value) {
        best_value = v;
        best = {i, j};
      }
    }
  return best;
}

EnvironmentSpec apply_zeta_coupling(const EnvironmentSpec& env, double zeta) {
  if (!(zeta >= 0.0 && zeta < 1.0)) throw std::invalid_argument(fmt::format("zeta = {} outside [0,1)", zeta));
  Matrix m = env.mstar();
  const auto [i, j] = best_offdiagonal_pair(m);
  const double value = zeta * 0.5 * (m(i, j) + m(j, i));
  m(i, i) = value;
  m(j, j) = value;
  return EnvironmentSpec(std::move(m), env.sigma(), std::nullopt, env.seed());
}

Matrix pair_value_table(const ArmSet& arms, const EnvironmentSpec& env) {
  if (arms.dim() != env.dim()) throw std::invalid_argument("arm dimension does not match M*");
  const int k = arms.size();
  Matrix x(arms.dim(), k);
  for (int a = 0; a < k; ++a) x.col(a) = arms[a];
  return x.transpose() * env.mstar() * x;
}

void check_reward_range(const ArmSet& arms, const EnvironmentSpec& env) {
  const Matrix table = pair_value_table(arms, env);
  const double upper = arms.norm_bound() * env.norm_bound();
  const double tol = 1e-12 * std::max(1.0, upper);
  for (int a = 0; a < table.rows(); ++a)
    for (int b = 0; b < table.cols(); ++b)
      if (table(a, b) < -tol || table(a, b) > upper + tol)
        throw std::invalid_argument(
            fmt::format("expected reward {} of arms ({},{}) outside [0, LS = {}]", table(a, b), a, b, upper));
}

nlohmann::json environment_to_json(const EnvironmentSpec& env) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < env.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < env.dim(); ++j) row.push_back(env.mstar()(i, j));
    rows.push_back(std::move(row));
  }
  return {{"d", env.dim()}, {"mstar", rows}, {"sigma", env.sigma()}, {"seed", env.seed()}};
}

EnvironmentSpec environment_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const auto& rows = j.at("mstar");
  if (static_cast<int>(rows.size()) != d) throw std::invalid_argument("mstar row count differs from d");
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(rows[i].size()) != d) throw std::invalid_argument("mstar row length differs from d");
    for (int k = 0; k < d; ++k) m(i, k) = rows[i][k].get<double>();
  }
  return EnvironmentSpec(std::move(m), j.value("sigma", 0.0), std::nullopt, j.value("seed", std::uint64_t{0}));
}

}  // namespace gbb
