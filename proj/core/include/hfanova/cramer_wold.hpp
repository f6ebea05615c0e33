#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "hfanova/covariance_model.hpp"

namespace hfanova {

/// H0: K beta = C. The default contrast has rows (1, 0, .., -1, .., 0).
struct ContrastSpec {
  Eigen::MatrixXd K;
  Eigen::VectorXd C;

  static ContrastSpec equal_components(int p);
};

/// Sum_k h_k^2 Lambda_k. Throws DomainError for an all-zero direction.
Eigen::MatrixXd lambda_h(const Eigen::VectorXd& h, const LambdaSequence& lambdas);

/// Gls uses (X^T Lambda_h^{-1} X)^{-1}; Printed uses (X^T Lambda_h X)^{-1}.
enum class QForm { Gls, Printed };

struct TestReport {
  double t_value = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  double alpha = 0.05;
  bool reject = false;
  std::uint64_t direction_seed = 0;
};

/// Pre-factors Lambda_h and Q for one direction so many samples can be tested.
class ProjectedTest {
 public:
  ProjectedTest(const Eigen::MatrixXd& X, const Eigen::VectorXd& h, const LambdaSequence& lambdas,
                ContrastSpec contrast, QForm form = QForm::Gls);

  /// Y(h)_i = sum_k h_k Y_{ik}; response_coefficients is n x TR.
  Eigen::VectorXd project(const Eigen::MatrixXd& response_coefficients) const;
  Eigen::VectorXd beta_h(const Eigen::VectorXd& y_h) const;
  TestReport run(const Eigen::MatrixXd& response_coefficients, double alpha) const;

  const Eigen::MatrixXd& q() const { return q_; }

 private:
  Eigen::MatrixXd X_;
  Eigen::VectorXd h_;
  ContrastSpec contrast_;
  Eigen::LLT<Eigen::MatrixXd> lambda_llt_;
  Eigen::MatrixXd whitened_x_;
  Eigen::LLT<Eigen::MatrixXd> normal_llt_;
  Eigen::MatrixXd q_;
  Eigen::LLT<Eigen::MatrixXd> kqk_llt_;
};

TestReport t_statistic(const Eigen::MatrixXd& X, const Eigen::MatrixXd& response_coefficients,
                       const Eigen::VectorXd& h, const LambdaSequence& lambdas,
                       const ContrastSpec& contrast, double alpha = 0.05,
                       QForm form = QForm::Gls);

struct CampaignRow {
  int direction = 0;
  double success_rate = 0.0;
  double mean_p_value = 0.0;
};

}  // namespace hfanova
