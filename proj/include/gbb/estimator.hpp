#pragma once

// Online ridge estimate of theta* over streamed (edge-arm, reward) pairs and
// the confidence ellipsoid around it.

#include <cstdint>
#include <span>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "gbb/bilinear.hpp"

namespace gbb {

/// A = lambda I + sum z z^T and b = sum z y, with a cached inverse of A kept
/// current by Sherman-Morrison updates and refreshed from a Cholesky
/// factorisation every `refresh_interval` updates.
class RidgeState {
 public:
  RidgeState(int dim, double lambda);

  /// Starts with b = lambda * prior_mean, so theta_hat() == prior_mean
  /// before any data arrives.
  RidgeState(int dim, double lambda, const Vector& prior_mean);

  void update(const Vector& z, double y);

  /// Equivalent to `count` calls of update(z, y_i) with sum y_i = y_sum.
  void update_repeated(const Vector& z, long count, double y_sum);

  /// A^{-1} b through the cached inverse plus one step of iterative refinement.
  Vector theta_hat() const;

  /// A^{-1} b through a fresh Cholesky solve. Reference path for tests.
  Vector theta_hat_exact() const;

  /// v^T A^{-1} v.
  double inverse_quadratic(const Vector& v) const;

  int dim() const { return static_cast<int>(b_.size()); }
  double lambda() const { return lambda_; }
  long pulls() const { return pulls_; }
  const Matrix& a_mat() const { return a_; }
  const Vector& b_vec() const { return b_; }
  const Matrix& a_inverse() const { return a_inv_; }

  void set_refresh_interval(int updates) { refresh_interval_ = updates; }
  void refresh_inverse();

  nlohmann::json to_json() const;
  static RidgeState from_json(const nlohmann::json& j);

 private:
  void check_dim(const Vector& v) const;

  Matrix a_;
  Matrix a_inv_;
  Vector b_;
  double lambda_;
  long pulls_ = 0;
  int refresh_interval_ = 512;
  int since_refresh_ = 0;
};

struct ConfidenceParams {
  double delta = 0.1;
  double sigma = 0.0;
  double S = 1.0;   // bound on ||theta*||
  double L = 1.0;   // bound on arm norms
  long m = 1;       // edges per round
  int arm_dim = 2;  // d, so theta lives in R^{d^2}

  void validate() const;
};

/// Which norm the membership test measures ||theta - theta_hat|| in.
enum class EllipsoidNorm {
  inverse,    // ||.||_{A^{-1}}, the notation used in the confidence-set definition
  classical,  // ||.||_{A}, the self-normalised bound of linear bandits
};

/// sigma sqrt(d^2 log((1 + t m L^2 / lambda) / delta)) + sqrt(lambda) S, for t >= 1.
double beta_radius(const RidgeState& state, const ConfidenceParams& params, long t);

/// <v, theta_hat> + radius ||v||_{A^{-1}}: the maximum of <v, theta> over
/// { theta : ||theta - theta_hat||_A <= radius }.
double ucb_value(const RidgeState& state, const Vector& v, double radius);
double ucb_value(const RidgeState& state, const Vector& theta_hat, const Vector& v, double radius);

/// The point of the ellipsoid attaining ucb_value.
Vector ucb_maximizer(const RidgeState& state, const Vector& v, double radius);

bool contains_theta(const RidgeState& state, const ConfidenceParams& params, long t, const Vector& theta,
                    EllipsoidNorm norm = EllipsoidNorm::inverse);

}  // namespace gbb
