#include "hfanova/fanova.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "hfanova/error.hpp"

namespace hfanova {

WeightTransform build_w(const LambdaSequence& lambdas) {
  WeightTransform t;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lambdas[k]);
    if (eig.info() != Eigen::Success) {
      throw NumericalError("eigendecomposition of Lambda_" + std::to_string(k + 1) + " failed");
    }
    // Eigen returns ascending order; reverse to descending.
    const Eigen::VectorXd values = eig.eigenvalues().reverse();
    const Eigen::MatrixXd vectors = eig.eigenvectors().rowwise().reverse();
    const double a = static_cast<double>(k + 1) * static_cast<double>(k + 1);
    const Eigen::VectorXd omega = values.array() + 1.0 / a;
    Eigen::MatrixXd w = vectors * omega.asDiagonal() * vectors.transpose();
    w = 0.5 * (w + w.transpose()).eval();
    t.w.push_back(std::move(w));
    t.eigenvalues.push_back(values);
    t.eigenvectors.push_back(vectors);
  }
  return t;
}

WeightTransform identity_transform(std::size_t tr, std::size_t n) {
  WeightTransform t;
  const auto nn = static_cast<Eigen::Index>(n);
  for (std::size_t k = 0; k < tr; ++k) {
    t.w.push_back(Eigen::MatrixXd::Identity(nn, nn));
    t.eigenvalues.push_back(Eigen::VectorXd::Ones(nn));
    t.eigenvectors.push_back(Eigen::MatrixXd::Identity(nn, nn));
  }
  return t;
}

FanovaResult decompose(const GlsSolver& solver, const Eigen::MatrixXd& response_coefficients,
                       const WeightTransform& transform) {
  const auto tr = solver.size();
  if (transform.size() != tr || static_cast<std::size_t>(response_coefficients.cols()) != tr) {
    throw DomainError("decompose: truncation orders of response, transform and Lambda differ");
  }
  FanovaResult r;
  r.per_k.resize(static_cast<Eigen::Index>(tr), 3);
  for (std::size_t k = 0; k < tr; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const Eigen::VectorXd wy = transform.w[k] * response_coefficients.col(kk);
    const double sst = solver.quadratic(k, wy);
    const double sse = solver.quadratic(k, solver.residual(k, wy));
    r.per_k(kk, 0) = sst;
    r.per_k(kk, 1) = sse;
    r.per_k(kk, 2) = sst - sse;
    r.sst += sst;
    r.sse += sse;
  }
  r.ssr = r.sst - r.sse;
  if (r.sse > 0.0) {
    r.f_value = r.ssr / r.sse;
  } else if (r.ssr > 0.0) {
    r.f_value = std::numeric_limits<double>::infinity();
    r.f_infinite = true;
  } else {
    r.f_value = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

FanovaResult decompose(const Eigen::MatrixXd& X, const Eigen::MatrixXd& response_coefficients,
                       const WeightTransform& transform, const LambdaSequence& lambdas) {
  return decompose(GlsSolver(X, lambdas), response_coefficients, transform);
}

FSummary summarize_f(const std::vector<FanovaResult>& results) {
  if (results.empty()) throw DomainError("summarize_f needs at least one replicate");
  std::vector<double> values;
  FSummary s;
  double sum = 0.0;
  std::size_t finite = 0;
  for (const auto& r : results) {
    if (!std::isnan(r.f_value)) values.push_back(r.f_value);
    if (std::isfinite(r.f_value)) {
      sum += r.f_value;
      ++finite;
    } else if (r.f_infinite) {
      ++s.infinite;
    }
  }
  if (values.empty()) throw NumericalError("summarize_f: every F value is undefined");
  std::sort(values.begin(), values.end());
  const auto m = values.size();
  s.median = m % 2 == 1 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
  s.mean = finite > 0 ? sum / static_cast<double>(finite)
                      : std::numeric_limits<double>::infinity();
  return s;
}

}  // namespace hfanova
