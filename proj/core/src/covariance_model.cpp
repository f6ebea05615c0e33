#include "hfanova/covariance_model.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "hfanova/csv.hpp"
#include "hfanova/error.hpp"
#include "hfanova/spectral_basis.hpp"

namespace hfanova {

std::string to_string(LambdaKind kind) {
  switch (kind) {
    case LambdaKind::TheoreticalFull:
      return "theoretical_full";
    case LambdaKind::TheoreticalTridiagonal:
      return "theoretical_tridiagonal";
    case LambdaKind::Empirical:
      return "empirical";
  }
  return "unknown";
}

Eigen::VectorXd default_gamma(int n) {
  if (n < 2) throw DomainError("gamma profile needs n >= 2");
  Eigen::VectorXd g(n);
  for (int i = 0; i < n; ++i) g[i] = 0.1 + 0.8 * static_cast<double>(i) / (n - 1);
  return g;
}

void validate_gamma(const Eigen::VectorXd& gamma) {
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    if (!(gamma[i] > 0.0 && gamma[i] < 1.0)) {
      throw DomainError("gamma_" + std::to_string(i + 1) + " = " + std::to_string(gamma[i]) +
                        " is outside (0, 1)");
    }
  }
}

void validate_positive_definite(const Eigen::MatrixXd& m, std::size_t k) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  throw NotPositiveDefinite(k, eig.eigenvalues().minCoeff());
}

LambdaSequence lambda_theoretical(const Eigen::VectorXd& laplacian_eigenvalues,
                                  const Eigen::VectorXd& gamma,
                                  const TheoreticalOptions& options) {
  const auto n = gamma.size();
  if (n < 2) throw DomainError("lambda_theoretical needs n >= 2");
  validate_gamma(gamma);
  if (!(options.eigenvalue_scale > 0.0)) throw DomainError("eigenvalue scale must be positive");

  LambdaSequence seq;
  seq.kind = LambdaKind::TheoreticalFull;
  seq.matrices.reserve(static_cast<std::size_t>(laplacian_eigenvalues.size()));
  for (Eigen::Index k = 0; k < laplacian_eigenvalues.size(); ++k) {
    const double ev = laplacian_eigenvalues[k] * options.eigenvalue_scale;
    if (!(ev > 0.0)) throw DomainError("Laplacian eigenvalues must be positive");
    Eigen::VectorXd diag(n);
    for (Eigen::Index i = 0; i < n; ++i) diag[i] = std::pow(ev, -2.0 * (2.0 - gamma[i]));
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, i) = diag[i];
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double v = std::exp(-static_cast<double>(j - i) / (diag[i] + diag[j]));
        m(i, j) = v;
        m(j, i) = v;
      }
    }
    if (options.validate) validate_positive_definite(m, static_cast<std::size_t>(k + 1));
    seq.matrices.push_back(std::move(m));
  }
  return seq;
}

LambdaSequence lambda_theoretical(const SpectralBasis& basis, const Eigen::VectorXd& gamma,
                                  const TheoreticalOptions& options) {
  return lambda_theoretical(basis.eigenvalues(), gamma, options);
}

double tridiagonal_dominance_bound(int n) {
  if (n < 2) throw DomainError("tridiagonal matrices need n >= 2");
  return 2.0 * std::cos(std::numbers::pi / (n + 1));
}

LambdaSequence lambda_tridiagonal(const Eigen::VectorXd& r0, const Eigen::VectorXd& r1, int n) {
  if (r0.size() != r1.size()) throw DomainError("lambda_tridiagonal: r0 and r1 lengths differ");
  const double bound = tridiagonal_dominance_bound(n);
  LambdaSequence seq;
  seq.kind = LambdaKind::TheoreticalTridiagonal;
  for (Eigen::Index k = 0; k < r0.size(); ++k) {
    if (!(r0[k] > 0.0) || !(std::abs(r1[k]) * bound < r0[k])) {
      throw DomainError("lambda_tridiagonal: dominance violated at k=" + std::to_string(k + 1) +
                        " (|r1| * " + std::to_string(bound) + " must be below r0)");
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      m(i, i) = r0[k];
      if (i + 1 < n) {
        m(i, i + 1) = r1[k];
        m(i + 1, i) = r1[k];
      }
    }
    seq.matrices.push_back(std::move(m));
  }
  return seq;
}

EmpiricalEstimate estimate_empirical(const Eigen::MatrixXd& residual_coefficients,
                                     const EmpiricalOptions& options) {
  const auto n = residual_coefficients.rows();
  const auto tr = residual_coefficients.cols();
  if (n < 3) throw DomainError("estimate_empirical needs n >= 3 observations");
  if (!(options.clip_fraction > 0.0 && options.clip_fraction < 1.0)) {
    throw DomainError("clip fraction must lie in (0, 1)");
  }
  const double limit = options.clip_fraction / tridiagonal_dominance_bound(static_cast<int>(n));

  EmpiricalEstimate est;
  est.r0.resize(tr);
  est.r1.resize(tr);
  est.lambdas.kind = LambdaKind::Empirical;
  for (Eigen::Index k = 0; k < tr; ++k) {
    const auto c = residual_coefficients.col(k);
    const double d = c.squaredNorm() / static_cast<double>(n);
    if (!(d > 0.0)) {
      throw NumericalError("estimate_empirical: degenerate residuals (all zero at k=" +
                           std::to_string(k + 1) + ")");
    }
    double o = c.head(n - 1).dot(c.tail(n - 1)) / static_cast<double>(n - 1);
    if (std::abs(o) > limit * d) {
      o = std::copysign(limit * d, o);
      est.clipped.push_back(static_cast<std::size_t>(k));
    }
    est.r0[k] = d;
    est.r1[k] = o;
  }
  est.lambdas = lambda_tridiagonal(est.r0, est.r1, static_cast<int>(n));
  est.lambdas.kind = LambdaKind::Empirical;
  if (!est.clipped.empty()) {
    std::clog << "hfanova: lag-one covariance clipped at " << est.clipped.size()
              << " frequencies\n";
  }
  return est;
}

std::size_t apply_pd_floor(LambdaSequence& lambdas, double eps) {
  if (!(eps > 0.0)) throw DomainError("pd floor must be positive");
  std::size_t changed = 0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    auto& m = lambdas.matrices[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const double floor = eps * m.trace() / static_cast<double>(m.rows());
    Eigen::VectorXd w = eig.eigenvalues();
    const auto lifted = (w.array() < floor).count();
    if (lifted == 0) continue;
    std::clog << "hfanova: WARNING pd-floor lifted " << lifted << " eigenvalue(s) of Lambda_"
              << k + 1 << " (smallest " << w.minCoeff() << ") to " << floor << "\n";
    w = w.cwiseMax(floor);
    m = eig.eigenvectors() * w.asDiagonal() * eig.eigenvectors().transpose();
    m = 0.5 * (m + m.transpose()).eval();
    ++changed;
  }
  return changed;
}

void write_lambda_csv(std::ostream& os, const LambdaSequence& lambdas) {
  csv_row(os, "k", "i", "j", "value");
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const auto& m = lambdas[k];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (lambdas.kind != LambdaKind::TheoreticalFull && std::abs(i - j) > 1) continue;
        csv_row(os, k + 1, i, j, m(i, j));
      }
    }
  }
}

LambdaSequence read_lambda_csv(std::istream& is, LambdaKind kind) {
  auto records = read_csv(is);
  std::map<long long, std::vector<std::tuple<long long, long long, double>>> entries;
  long long max_index = -1;
  for (const auto& rec : records) {
    if (rec.size() != 4) throw ConfigError("lambda CSV rows need 4 columns");
    if (!is_numeric_record(rec)) continue;  // header
    const auto k = parse_integer(rec[0]);
    const auto i = parse_integer(rec[1]);
    const auto j = parse_integer(rec[2]);
    if (k < 1 || i < 0 || j < 0) throw ConfigError("lambda CSV has a negative index");
    entries[k].emplace_back(i, j, parse_double(rec[3]));
    max_index = std::max({max_index, i, j});
  }
  LambdaSequence seq;
  seq.kind = kind;
  long long expected = 1;
  for (const auto& [k, list] : entries) {
    if (k != expected++) throw ConfigError("lambda CSV skips frequency " + std::to_string(k - 1));
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(max_index + 1, max_index + 1);
    for (const auto& [i, j, v] : list) m(i, j) = v;
    seq.matrices.push_back(std::move(m));
  }
  return seq;
}

}  // namespace hfanova
