#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace hfanova {

class SpectralBasis;

enum class LambdaKind { TheoreticalFull, TheoreticalTridiagonal, Empirical };

std::string to_string(LambdaKind kind);

/// Per-frequency n x n covariance matrices Lambda_1 .. Lambda_TR.
struct LambdaSequence {
  LambdaKind kind = LambdaKind::TheoreticalFull;
  std::vector<Eigen::MatrixXd> matrices;

  std::size_t size() const { return matrices.size(); }
  std::size_t n() const { return matrices.empty() ? 0 : static_cast<std::size_t>(matrices[0].rows()); }
  const Eigen::MatrixXd& operator[](std::size_t k) const { return matrices[k]; }
};

/// gamma_i = 0.1 + 0.8 (i-1)/(n-1).
Eigen::VectorXd default_gamma(int n);

/// Throws DomainError unless every gamma_i lies in (0, 1).
void validate_gamma(const Eigen::VectorXd& gamma);

struct TheoreticalOptions {
  /// Multiplies every Laplacian eigenvalue before it enters the power law.
  /// 1 keeps the eigenvalues of the physical domain.
  double eigenvalue_scale = 1.0;
  /// Skip the factorization check, for callers that repair afterwards.
  bool validate = true;
};

/// Diagonal lambda_k^{-2(2 - gamma_i)}, off-diagonal exp(-|i-j| / (lambda_ki + lambda_kj)).
/// Throws NotPositiveDefinite for the first k whose matrix fails to factor.
LambdaSequence lambda_theoretical(const Eigen::VectorXd& laplacian_eigenvalues,
                                  const Eigen::VectorXd& gamma,
                                  const TheoreticalOptions& options = {});
LambdaSequence lambda_theoretical(const SpectralBasis& basis, const Eigen::VectorXd& gamma,
                                  const TheoreticalOptions& options = {});

/// 2 cos(pi/(n+1)): a symmetric tridiagonal Toeplitz matrix with diagonal d and
/// off-diagonal o is positive definite iff |o| * bound < d.
double tridiagonal_dominance_bound(int n);

/// Tridiagonal Toeplitz Lambda_k with diagonal r0[k] and off-diagonals r1[k].
LambdaSequence lambda_tridiagonal(const Eigen::VectorXd& r0, const Eigen::VectorXd& r1, int n);

struct EmpiricalOptions {
  /// Off-diagonal magnitudes are clipped to this fraction of the PD limit.
  double clip_fraction = 0.99;
};

struct EmpiricalEstimate {
  LambdaSequence lambdas;
  Eigen::VectorXd r0;  // per-k diagonal estimate
  Eigen::VectorXd r1;  // per-k lag-one estimate after clipping
  std::vector<std::size_t> clipped;  // zero-based k where clipping engaged
};

/// residual_coefficients is n x TR. Requires n >= 3 and no all-zero column.
EmpiricalEstimate estimate_empirical(const Eigen::MatrixXd& residual_coefficients,
                                     const EmpiricalOptions& options = {});

/// Throws NotPositiveDefinite(k, smallest eigenvalue) when LLT fails.
void validate_positive_definite(const Eigen::MatrixXd& m, std::size_t k);

/// Raises eigenvalues below eps * trace / n to that floor, logging every
/// repaired k on stderr. Returns the number of matrices changed.
std::size_t apply_pd_floor(LambdaSequence& lambdas, double eps);

/// Rows (k, i, j, value), one-based k, zero-based i and j.
void write_lambda_csv(std::ostream& os, const LambdaSequence& lambdas);
LambdaSequence read_lambda_csv(std::istream& is, LambdaKind kind);

}  // namespace hfanova
