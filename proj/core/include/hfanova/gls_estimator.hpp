#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "hfanova/covariance_model.hpp"
#include "hfanova/gaussian_simulation.hpp"
#include "hfanova/spectral_basis.hpp"

namespace hfanova {

/// Per-frequency GLS with the Lambda_k and X^T Lambda_k^{-1} X factorizations
/// computed once and shared by every response.
class GlsSolver {
 public:
  /// Throws SingularSystem when cond(X^T Lambda_k^{-1} X) exceeds max_condition.
  GlsSolver(const Eigen::MatrixXd& X, const LambdaSequence& lambdas, double max_condition = 1e12);

  std::size_t size() const { return lambda_llt_.size(); }
  std::size_t n() const { return static_cast<std::size_t>(X_.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(X_.cols()); }
  const Eigen::MatrixXd& design() const { return X_; }
  LambdaKind kind() const { return kind_; }

  /// beta_hat_k for one coefficient vector y (length n).
  Eigen::VectorXd beta(std::size_t k, const Eigen::Ref<const Eigen::VectorXd>& y) const;
  /// All frequencies at once: n x TR response coefficients to TR x p.
  Eigen::MatrixXd beta(const Eigen::MatrixXd& response_coefficients) const;

  /// M_k y = y - X beta_hat_k(y).
  Eigen::VectorXd residual(std::size_t k, const Eigen::Ref<const Eigen::VectorXd>& y) const;
  /// y^T Lambda_k^{-1} y.
  double quadratic(std::size_t k, const Eigen::Ref<const Eigen::VectorXd>& y) const;
  /// Lambda_k^{-1} y.
  Eigen::VectorXd solve_lambda(std::size_t k, const Eigen::Ref<const Eigen::VectorXd>& y) const;
  /// (X^T Lambda_k^{-1} X)^{-1}, the covariance of beta_hat_k.
  Eigen::MatrixXd covariance(std::size_t k) const;
  double condition(std::size_t k) const { return condition_[k]; }

 private:
  Eigen::MatrixXd X_;
  LambdaKind kind_;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> lambda_llt_;
  std::vector<Eigen::MatrixXd> whitened_x_;  // L_k^{-1} X
  std::vector<Eigen::LLT<Eigen::MatrixXd>> normal_llt_;
  std::vector<double> condition_;
};

struct GlsFit {
  Eigen::MatrixXd beta_coefficients;      // TR x p
  Eigen::MatrixXd beta_fields;            // p x L (empty without a basis)
  Eigen::MatrixXd fitted_coefficients;    // n x TR
  Eigen::MatrixXd residual_coefficients;  // n x TR
  LambdaKind provenance = LambdaKind::TheoreticalFull;
};

GlsFit fit(const GlsSolver& solver, const Eigen::MatrixXd& response_coefficients);
GlsFit fit(const Eigen::MatrixXd& X, const FunctionalSample& response,
           const LambdaSequence& lambdas, const SpectralBasis& basis);

/// Reconstructed grid fields: beta (p x L) and Y_hat (n x L).
Eigen::MatrixXd fitted_values(const GlsFit& fit, const SpectralBasis& basis);

/// (1/nu) sum_v sum_s ||beta_s - beta_hat_s||^2 in coefficient space (TR x p each).
double efmse_beta(const std::vector<Eigen::MatrixXd>& truth,
                  const std::vector<Eigen::MatrixXd>& estimates);
/// Same with H norms from grid quadrature; inputs are p x L fields.
double efmse_beta_quadrature(const SpectralBasis& basis, const std::vector<Eigen::MatrixXd>& truth,
                             const std::vector<Eigen::MatrixXd>& estimates);
/// (1/nu) sum_v sum_i ||Y_i - Y_hat_i||^2 in coefficient space (n x TR each).
double efmse_y(const std::vector<Eigen::MatrixXd>& responses,
               const std::vector<Eigen::MatrixXd>& fitted);

/// Accumulates the replicate mean of the max-over-rows squared pointwise error.
class LinfAccumulator {
 public:
  explicit LinfAccumulator(Eigen::Index nodes) : sum_(Eigen::VectorXd::Zero(nodes)) {}

  /// errors: rows are components (or observations), columns grid nodes.
  void add(const Eigen::MatrixXd& errors);
  Eigen::VectorXd mean() const;
  std::size_t count() const { return count_; }

 private:
  Eigen::VectorXd sum_;
  std::size_t count_ = 0;
};

Eigen::VectorXd linf_stats(const std::vector<Eigen::MatrixXd>& pointwise_errors);

/// Cumulative share of sum_k tr(Lambda_k) carried by the first TR' frequencies.
Eigen::VectorXd explained_variance(const LambdaSequence& lambdas);

}  // namespace hfanova
