#include "gbb/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "gbb/errors.hpp"

namespace gbb {

RidgeState::RidgeState(int dim, double lambda)
    : a_(Matrix::Identity(dim, dim) * lambda),
      a_inv_(Matrix::Identity(dim, dim) / lambda),
      b_(Vector::Zero(dim)),
      lambda_(lambda) {
  if (dim < 1) throw std::invalid_argument("ridge state needs a positive dimension");
  if (!(lambda > 0.0)) throw std::invalid_argument("ridge regularisation must be positive");
}

RidgeState::RidgeState(int dim, double lambda, const Vector& prior_mean) : RidgeState(dim, lambda) {
  check_dim(prior_mean);
  b_ = lambda * prior_mean;
}

void RidgeState::check_dim(const Vector& v) const {
  if (v.size() != b_.size())
    throw std::invalid_argument(fmt::format("vector of size {} fed to ridge state of size {}", v.size(), b_.size()));
}

void RidgeState::update(const Vector& z, double y) { update_repeated(z, 1, y); }

void RidgeState::update_repeated(const Vector& z, long count, double y_sum) {
  check_dim(z);
  if (count < 1) throw std::invalid_argument("update count must be positive");
  const double c = static_cast<double>(count);

  std::vector<Eigen::Index> nz;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (z(i) != 0.0) nz.push_back(i);

  for (Eigen::Index i : nz) {
    b_(i) += z(i) * y_sum;
    for (Eigen::Index j : nz) a_(i, j) += c * z(i) * z(j);
  }
  pulls_ += count;
  if (nz.empty()) return;

  if (++since_refresh_ >= refresh_interval_) {
    refresh_inverse();
    return;
  }
  Vector u = Vector::Zero(z.size());
  for (Eigen::Index j : nz) u.noalias() += a_inv_.col(j) * z(j);
  const double denom = 1.0 + c * z.dot(u);
  a_inv_.noalias() -= (c / denom) * u * u.transpose();
}

void RidgeState::refresh_inverse() {
  Eigen::LLT<Matrix> llt(a_);
  if (llt.info() != Eigen::Success) throw NumericalError("ridge design matrix is not positive definite");
  a_inv_ = llt.solve(Matrix::Identity(a_.rows(), a_.cols()));
  a_inv_ = 0.5 * (a_inv_ + a_inv_.transpose()).eval();
  since_refresh_ = 0;
}

Vector RidgeState::theta_hat() const {
  Vector theta = a_inv_ * b_;
  const Vector residual = b_ - a_ * theta;
  theta.noalias() += a_inv_ * residual;
  return theta;
}

Vector RidgeState::theta_hat_exact() const {
  Eigen::LLT<Matrix> llt(a_);
  if (llt.info() != Eigen::Success) throw NumericalError("ridge design matrix is not positive definite");
  return llt.solve(b_);
}

double RidgeState::inverse_quadratic(const Vector& v) const {
  check_dim(v);
  return std::max(0.0, v.dot(a_inv_ * v));
}

nlohmann::json RidgeState::to_json() const {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < a_.cols(); ++j) row.push_back(a_(i, j));
    a.push_back(std::move(row));
  }
  return {{"a_mat", a}, {"b_vec", std::vector<double>(b_.data(), b_.data() + b_.size())},
          {"lambda", lambda_}, {"pulls", pulls_}};
}

RidgeState RidgeState::from_json(const nlohmann::json& j) {
  const auto b = j.at("b_vec").get<std::vector<double>>();
  const int dim = static_cast<int>(b.size());
  RidgeState state(dim, j.at("lambda").get<double>());
  const auto& rows = j.at("a_mat");
  if (static_cast<int>(rows.size()) != dim) throw std::invalid_argument("a_mat shape differs from b_vec");
  for (int r = 0; r < dim; ++r) {
    if (static_cast<int>(rows[r].size()) != dim) throw std::invalid_argument("a_mat is not square");
    for (int c = 0; c < dim; ++c) state.a_(r, c) = rows[r][c].get<double>();
    state.b_(r) = b[r];
  }
  state.pulls_ = j.at("pulls").get<long>();
  state.refresh_inverse();
  return state;
}

void ConfidenceParams::validate() const {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument(fmt::format("delta = {} outside (0,1]", delta));
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
  if (!(S > 0.0) || !(L > 0.0)) throw std::invalid_argument("norm bounds S and L must be positive");
  if (m < 1) throw std::invalid_argument("edge count m must be positive");
  if (arm_dim < 1) throw std::invalid_argument("arm dimension must be positive");
}

double beta_radius(const RidgeState& state, const ConfidenceParams& params, long t) {
  if (t < 1) throw std::invalid_argument("confidence radius is defined for t >= 1");
  params.validate();
  const double d2 = static_cast<double>(params.arm_dim) * params.arm_dim;
  const double growth =
      1.0 + static_cast<double>(t) * static_cast<double>(params.m) * params.L * params.L / state.lambda();
  return params.sigma * std::sqrt(d2 * std::log(growth / params.delta)) + std::sqrt(state.lambda()) * params.S;
}

double ucb_value(const RidgeState& state, const Vector& theta_hat, const Vector& v, double radius) {
  if (radius < 0.0) throw std::invalid_argument("radius must be non-negative");
  if (theta_hat.size() != v.size()) throw std::invalid_argument("ucb vector dimension mismatch");
  return v.dot(theta_hat) + radius * std::sqrt(state.inverse_quadratic(v));
}

double ucb_value(const RidgeState& state, const Vector& v, double radius) {
  return ucb_value(state, state.theta_hat(), v, radius);
}

Vector ucb_maximizer(const RidgeState& state, const Vector& v, double radius) {
  const Vector theta = state.theta_hat();
  const double norm = std::sqrt(state.inverse_quadratic(v));
  if (norm == 0.0) return theta;
  return theta + (radius / norm) * (state.a_inverse() * v);
}

bool contains_theta(const RidgeState& state, const ConfidenceParams& params, long t, const Vector& theta,
                    EllipsoidNorm norm) {
  if (theta.size() != state.dim()) throw std::invalid_argument("theta dimension mismatch");
  const Vector diff = theta - state.theta_hat();
  const double sq = norm == EllipsoidNorm::inverse ? diff.dot(state.a_inverse() * diff) : diff.dot(state.a_mat() * diff);
  return std::sqrt(std::max(sq, 0.0)) <= beta_radius(state, params, t);
}

}  // namespace gbb
