#include "hfanova/cramer_wold.hpp"

#include <algorithm>
#include <utility>

#include "hfanova/error.hpp"
#include "hfanova/special_functions.hpp"

namespace hfanova {

ContrastSpec ContrastSpec::equal_components(int p) {
  if (p < 2) throw DomainError("contrast needs p >= 2");
  ContrastSpec c;
  c.K = Eigen::MatrixXd::Zero(p - 1, p);
  c.K.col(0).setOnes();
  c.K.rightCols(p - 1).diagonal().setConstant(-1.0);
  c.C = Eigen::VectorXd::Zero(p - 1);
  return c;
}

Eigen::MatrixXd lambda_h(const Eigen::VectorXd& h, const LambdaSequence& lambdas) {
  if (static_cast<std::size_t>(h.size()) != lambdas.size()) {
    throw DomainError("lambda_h: direction has " + std::to_string(h.size()) +
                      " coefficients, Lambda has " + std::to_string(lambdas.size()));
  }
  if (h.isZero(0.0)) throw DomainError("lambda_h: direction is identically zero");
  const auto n = static_cast<Eigen::Index>(lambdas.n());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double hk = h[static_cast<Eigen::Index>(k)];
    out.noalias() += (hk * hk) * lambdas[k];
  }
  return out;
}

ProjectedTest::ProjectedTest(const Eigen::MatrixXd& X, const Eigen::VectorXd& h,
                             const LambdaSequence& lambdas, ContrastSpec contrast, QForm form)
    : X_(X), h_(h), contrast_(std::move(contrast)) {
  const auto p = X.cols();
  if (p < 2) throw DomainError("projected test needs p >= 2");
  if (contrast_.K.cols() != p || contrast_.K.rows() != contrast_.C.size()) {
    throw DomainError("contrast shape does not match the design");
  }
  const Eigen::MatrixXd lh = lambda_h(h, lambdas);
  lambda_llt_.compute(lh);
  if (lambda_llt_.info() != Eigen::Success) validate_positive_definite(lh, 0);
  whitened_x_ = lambda_llt_.matrixL().solve(X);
  normal_llt_.compute(whitened_x_.transpose() * whitened_x_);
  if (normal_llt_.info() != Eigen::Success) throw SingularSystem(0, 0.0);
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(p, p);
  if (form == QForm::Gls) {
    q_ = normal_llt_.solve(identity);
  } else {
    Eigen::LLT<Eigen::MatrixXd> printed(X.transpose() * lh * X);
    if (printed.info() != Eigen::Success) throw SingularSystem(0, 0.0);
    q_ = printed.solve(identity);
  }
  kqk_llt_.compute(contrast_.K * q_ * contrast_.K.transpose());
  if (kqk_llt_.info() != Eigen::Success) {
    throw NumericalError("projected test: K Q K^T is singular");
  }
}

Eigen::VectorXd ProjectedTest::project(const Eigen::MatrixXd& response_coefficients) const {
  if (response_coefficients.cols() != h_.size() || response_coefficients.rows() != X_.rows()) {
    throw DomainError("projected test: response coefficients must be n x TR");
  }
  return response_coefficients * h_;
}

Eigen::VectorXd ProjectedTest::beta_h(const Eigen::VectorXd& y_h) const {
  const Eigen::VectorXd wy = lambda_llt_.matrixL().solve(y_h);
  return normal_llt_.solve(whitened_x_.transpose() * wy);
}

TestReport ProjectedTest::run(const Eigen::MatrixXd& response_coefficients, double alpha) const {
  const Eigen::VectorXd b = beta_h(project(response_coefficients));
  const Eigen::VectorXd v = contrast_.K * b - contrast_.C;
  TestReport r;
  r.degrees_of_freedom = static_cast<int>(contrast_.K.rows());
  r.t_value = std::max(0.0, v.dot(kqk_llt_.solve(v)));
  r.p_value = chi2_sf(r.t_value, r.degrees_of_freedom);
  r.alpha = alpha;
  r.reject = r.p_value < alpha;
  return r;
}

TestReport t_statistic(const Eigen::MatrixXd& X, const Eigen::MatrixXd& response_coefficients,
                       const Eigen::VectorXd& h, const LambdaSequence& lambdas,
                       const ContrastSpec& contrast, double alpha, QForm form) {
  return ProjectedTest(X, h, lambdas, contrast, form).run(response_coefficients, alpha);
}

}  // namespace hfanova
