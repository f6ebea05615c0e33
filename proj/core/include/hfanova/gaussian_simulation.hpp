#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "hfanova/covariance_model.hpp"
#include "hfanova/spectral_basis.hpp"

namespace hfanova {

/// n x p matrix with orthonormal columns, from the QR factor of a seeded
/// standard normal matrix (signs fixed so R has a positive diagonal).
Eigen::MatrixXd make_design(int n, int p, std::uint64_t seed);

enum class BetaShape { RectC1, RectC2, DiskC1, DiskC2, DiskC3, SectC1, SectC2, SectC3 };

std::string to_string(BetaShape shape);
BetaShape parse_beta_shape(const std::string& text);

struct BetaSpec {
  BetaShape shape = BetaShape::RectC1;
  int p = 4;
  double radius = 0.0;  // R in the C2 coefficient formula
  int n = 200;          // n in the C2 coefficient formula
};

/// Coefficient formulas of the circular shapes; s and k are one-based.
double circular_beta_coefficient(BetaShape shape, int s, int k, int tr, int p, double radius, int n);

/// Pointwise rectangle shapes; s is one-based.
double rectangle_beta_value(BetaShape shape, const Rectangle& rect, int s, double x, double y);

struct BetaTruth {
  Eigen::MatrixXd coefficients;  // TR x p
  Eigen::MatrixXd fields;        // p x L
};

/// Rectangle shapes are evaluated on the grid and projected; circular shapes
/// are defined by their coefficients and reconstructed.
BetaTruth sample_beta(const SpectralBasis& basis, const BetaSpec& spec);

/// n observations of a field on L grid nodes, with its TR coefficients.
struct FunctionalSample {
  Eigen::MatrixXd values;        // n x L (may be empty in coefficient-only runs)
  Eigen::MatrixXd coefficients;  // n x TR
};

/// Caches the Cholesky factor of every Lambda_k so replicates are cheap.
class ErrorSampler {
 public:
  explicit ErrorSampler(const LambdaSequence& lambdas);

  /// n x TR matrix whose column k is N(0, Lambda_k); column k uses substream (seed, k).
  Eigen::MatrixXd draw(std::uint64_t seed) const;

  std::size_t n() const { return n_; }
  std::size_t size() const { return factors_.size(); }

 private:
  std::size_t n_ = 0;
  std::vector<Eigen::MatrixXd> factors_;  // lower triangular
};

FunctionalSample sample_error(const LambdaSequence& lambdas, const SpectralBasis& basis,
                              std::uint64_t seed);

struct Direction {
  Eigen::VectorXd coefficients;  // z_k / lambda_k
  Eigen::VectorXd field;
};

/// Solution of (-Laplacian) xi = white noise, truncated to the basis.
Direction sample_direction(const SpectralBasis& basis, std::uint64_t seed);
Eigen::VectorXd sample_direction_coefficients(const Eigen::VectorXd& laplacian_eigenvalues,
                                              std::uint64_t seed);

/// Y_i = sum_s X[i][s] beta_s + eps_i row-wise. beta is p x L, error n x L.
Eigen::MatrixXd make_response(const Eigen::MatrixXd& X, const Eigen::MatrixXd& beta,
                              const Eigen::MatrixXd& error);

}  // namespace hfanova
