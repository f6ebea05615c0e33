#include "hfanova/gls_estimator.hpp"

#include <limits>

#include <Eigen/Eigenvalues>

#include "hfanova/error.hpp"

namespace hfanova {

GlsSolver::GlsSolver(const Eigen::MatrixXd& X, const LambdaSequence& lambdas,
                     double max_condition)
    : X_(X), kind_(lambdas.kind) {
  if (lambdas.size() == 0) throw DomainError("GLS needs at least one frequency");
  if (static_cast<std::size_t>(X.rows()) != lambdas.n()) {
    throw DomainError("GLS: design has " + std::to_string(X.rows()) + " rows, Lambda is " +
                      std::to_string(lambdas.n()) + " x " + std::to_string(lambdas.n()));
  }
  const auto tr = lambdas.size();
  lambda_llt_.reserve(tr);
  whitened_x_.reserve(tr);
  normal_llt_.reserve(tr);
  condition_.reserve(tr);
  for (std::size_t k = 0; k < tr; ++k) {
    Eigen::LLT<Eigen::MatrixXd> llt(lambdas[k]);
    if (llt.info() != Eigen::Success) validate_positive_definite(lambdas[k], k + 1);
    Eigen::MatrixXd wx = llt.matrixL().solve(X);
    Eigen::MatrixXd normal = wx.transpose() * wx;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (!(cond <= max_condition)) throw SingularSystem(k + 1, cond);
    normal_llt_.emplace_back(normal);
    lambda_llt_.push_back(std::move(llt));
    whitened_x_.push_back(std::move(wx));
    condition_.push_back(cond);
  }
}

Eigen::VectorXd GlsSolver::beta(std::size_t k, const Eigen::Ref<const Eigen::VectorXd>& y) const {
  const Eigen::VectorXd wy = lambda_llt_[k].matrixL().solve(y);
  return normal_llt_[k].solve(whitened_x_[k].transpose() * wy);
}

Eigen::MatrixXd GlsSolver::beta(const Eigen::MatrixXd& response_coefficients) const {
  if (static_cast<std::size_t>(response_coefficients.cols()) != size() ||
      static_cast<std::size_t>(response_coefficients.rows()) != n()) {
    throw DomainError("GLS: response coefficients must be n x TR");
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(size()), X_.cols());
  for (std::size_t k = 0; k < size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) =
        beta(k, response_coefficients.col(static_cast<Eigen::Index>(k))).transpose();
  }
  return out;
}

Eigen::VectorXd GlsSolver::residual(std::size_t k,
                                    const Eigen::Ref<const Eigen::VectorXd>& y) const {
  return y - X_ * beta(k, y);
}

double GlsSolver::quadratic(std::size_t k, const Eigen::Ref<const Eigen::VectorXd>& y) const {
  return lambda_llt_[k].matrixL().solve(y).squaredNorm();
}

Eigen::VectorXd GlsSolver::solve_lambda(std::size_t k,
                                        const Eigen::Ref<const Eigen::VectorXd>& y) const {
  return lambda_llt_[k].solve(y);
}

Eigen::MatrixXd GlsSolver::covariance(std::size_t k) const {
  return normal_llt_[k].solve(Eigen::MatrixXd::Identity(X_.cols(), X_.cols()));
}

GlsFit fit(const GlsSolver& solver, const Eigen::MatrixXd& response_coefficients) {
  GlsFit f;
  f.provenance = solver.kind();
  f.beta_coefficients = solver.beta(response_coefficients);
  f.fitted_coefficients = solver.design() * f.beta_coefficients.transpose();
  f.residual_coefficients = response_coefficients - f.fitted_coefficients;
  return f;
}

GlsFit fit(const Eigen::MatrixXd& X, const FunctionalSample& response,
           const LambdaSequence& lambdas, const SpectralBasis& basis) {
  if (lambdas.size() != basis.size()) {
    throw DomainError("fit: Lambda sequence and basis have different truncation");
  }
  const Eigen::MatrixXd coefficients = response.coefficients.size() > 0
                                           ? response.coefficients
                                           : basis.project_rows(response.values);
  GlsSolver solver(X, lambdas);
  GlsFit f = fit(solver, coefficients);
  f.beta_fields = basis.reconstruct_rows(f.beta_coefficients.transpose());
  return f;
}

Eigen::MatrixXd fitted_values(const GlsFit& fit, const SpectralBasis& basis) {
  return basis.reconstruct_rows(fit.fitted_coefficients);
}

namespace {

void check_replicates(std::size_t a, std::size_t b) {
  if (a == 0) throw DomainError("EFMSE needs at least one replicate");
  if (a != b) throw DomainError("EFMSE: replicate counts differ");
}

}  // namespace

double efmse_beta(const std::vector<Eigen::MatrixXd>& truth,
                  const std::vector<Eigen::MatrixXd>& estimates) {
  check_replicates(truth.size(), estimates.size());
  double total = 0.0;
  for (std::size_t v = 0; v < truth.size(); ++v) {
    if (truth[v].rows() != estimates[v].rows() || truth[v].cols() != estimates[v].cols()) {
      throw DomainError("EFMSE: replicate shapes differ");
    }
    total += (truth[v] - estimates[v]).squaredNorm();
  }
  return total / static_cast<double>(truth.size());
}

double efmse_beta_quadrature(const SpectralBasis& basis, const std::vector<Eigen::MatrixXd>& truth,
                             const std::vector<Eigen::MatrixXd>& estimates) {
  check_replicates(truth.size(), estimates.size());
  const auto& w = basis.grid().weight;
  double total = 0.0;
  for (std::size_t v = 0; v < truth.size(); ++v) {
    if (truth[v].rows() != estimates[v].rows() || truth[v].cols() != w.size() ||
        estimates[v].cols() != w.size()) {
      throw DomainError("EFMSE: replicate shapes differ");
    }
    total += ((truth[v] - estimates[v]).array().square().rowwise() * w.transpose().array()).sum();
  }
  return total / static_cast<double>(truth.size());
}

double efmse_y(const std::vector<Eigen::MatrixXd>& responses,
               const std::vector<Eigen::MatrixXd>& fitted) {
  return efmse_beta(responses, fitted);
}

void LinfAccumulator::add(const Eigen::MatrixXd& errors) {
  if (errors.cols() != sum_.size()) throw DomainError("L-infinity: node count mismatch");
  sum_ += errors.array().square().colwise().maxCoeff().matrix().transpose();
  ++count_;
}

Eigen::VectorXd LinfAccumulator::mean() const {
  if (count_ == 0) throw DomainError("L-infinity needs at least one replicate");
  return sum_ / static_cast<double>(count_);
}

Eigen::VectorXd linf_stats(const std::vector<Eigen::MatrixXd>& pointwise_errors) {
  if (pointwise_errors.empty()) throw DomainError("L-infinity needs at least one replicate");
  LinfAccumulator acc(pointwise_errors.front().cols());
  for (const auto& e : pointwise_errors) acc.add(e);
  return acc.mean();
}

Eigen::VectorXd explained_variance(const LambdaSequence& lambdas) {
  Eigen::VectorXd cumulative(static_cast<Eigen::Index>(lambdas.size()));
  double running = 0.0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    running += lambdas[k].trace();
    cumulative[static_cast<Eigen::Index>(k)] = running;
  }
  if (running > 0.0) cumulative /= running;
  return cumulative;
}

}  // namespace hfanova
