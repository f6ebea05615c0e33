#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "hfanova/covariance_model.hpp"
#include "hfanova/gls_estimator.hpp"

namespace hfanova {

/// W_k = Psi_k diag(omega_i + 1/k^2) Psi_k^T from Lambda_k = Psi_k Omega Psi_k^T,
/// eigenvalues in descending order.
struct WeightTransform {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> eigenvalues;
  std::vector<Eigen::MatrixXd> eigenvectors;

  std::size_t size() const { return w.size(); }
};

WeightTransform build_w(const LambdaSequence& lambdas);
/// W_k = I for every k.
WeightTransform identity_transform(std::size_t tr, std::size_t n);

struct FanovaResult {
  double sst = 0.0;
  double sse = 0.0;
  double ssr = 0.0;
  double f_value = 0.0;
  bool f_infinite = false;     // SSE == 0 with SSR > 0
  Eigen::MatrixXd per_k;       // TR x 3: SST_k, SSE_k, SSR_k
};

/// response_coefficients is n x TR. The solver carries X and Lambda.
FanovaResult decompose(const GlsSolver& solver, const Eigen::MatrixXd& response_coefficients,
                       const WeightTransform& transform);
FanovaResult decompose(const Eigen::MatrixXd& X, const Eigen::MatrixXd& response_coefficients,
                       const WeightTransform& transform, const LambdaSequence& lambdas);

/// Median and mean of finite F values; infinite values count toward the median.
struct FSummary {
  double median = 0.0;
  double mean = 0.0;
  std::size_t infinite = 0;
};
FSummary summarize_f(const std::vector<FanovaResult>& results);

}  // namespace hfanova
