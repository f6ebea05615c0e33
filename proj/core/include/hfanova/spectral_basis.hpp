#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "hfanova/domain.hpp"

namespace hfanova {

enum class Parity { Cos, Sin };

struct RectangleIndex {
  int k1 = 1;
  int k2 = 1;
};

/// J_order(alpha r / R) times cos or sin(order * phi). Order 0 only has Cos.
struct DiskIndex {
  int order = 0;
  int root = 1;
  Parity parity = Parity::Cos;
};

/// J_{k/theta}(alpha r / R) sin(k phi / theta).
struct SectorIndex {
  int k = 1;
  int root = 1;
};

using MultiIndex = std::variant<RectangleIndex, DiskIndex, SectorIndex>;

struct EigenPair {
  MultiIndex index;
  double eigenvalue = 0.0;     // of the Dirichlet negative Laplacian
  double normalization = 0.0;  // analytic L2 normalization constant
  double bessel_order = 0.0;   // circular domains only
  double bessel_zero = 0.0;    // circular domains only
};

/// TR1 x TR2 tensor block of sine modes.
struct RectangleTruncation {
  int tr1 = 4;
  int tr2 = 4;
};

/// Fixed angular index with `radial_roots` radial modes. A negative angular
/// index picks the smallest admissible one (0 on the disk, 1 on the sector).
struct CircularTruncation {
  int radial_roots = 7;
  int angular_index = -1;
  Parity parity = Parity::Cos;
};

/// The `count` smallest eigenvalues over all multi-indices.
struct GlobalTruncation {
  int count = 16;
};

using TruncationSpec = std::variant<RectangleTruncation, CircularTruncation, GlobalTruncation>;

struct BasisOptions {
  std::size_t max_pairs = 10000;
};

/// Ordered eigenpairs without any grid evaluation. Ascending eigenvalue, ties
/// broken by lexicographic multi-index.
std::vector<EigenPair> eigenpairs(const Domain& domain, const TruncationSpec& truncation,
                                  const BasisOptions& options = {});

/// Pointwise value of one eigenfunction. Polar coordinates are used for the
/// circular domains, Cartesian for the rectangle.
double eigenfunction(const Domain& domain, const EigenPair& pair, double first, double second);

std::string describe(const MultiIndex& index);

class SpectralBasis {
 public:
  SpectralBasis(Domain domain, QuadratureGrid grid, std::vector<EigenPair> pairs);

  const Domain& domain() const { return domain_; }
  const QuadratureGrid& grid() const { return grid_; }
  const std::vector<EigenPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  std::size_t nodes() const { return grid_.size(); }

  /// V[k][j] = phi_k at node j, shape TR x L.
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::VectorXd eigenvalues() const;

  /// c_k = sum_j w_j V[k][j] f[j].
  Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& field) const;
  /// Row-wise projection of an m x L matrix of fields; returns m x TR.
  Eigen::MatrixXd project_rows(const Eigen::Ref<const Eigen::MatrixXd>& fields) const;

  Eigen::VectorXd reconstruct(const Eigen::Ref<const Eigen::VectorXd>& coefficients) const;
  /// m x TR coefficients to m x L fields.
  Eigen::MatrixXd reconstruct_rows(const Eigen::Ref<const Eigen::MatrixXd>& coefficients) const;

  /// Quadrature L2 inner product of two grid fields.
  double inner(const Eigen::Ref<const Eigen::VectorXd>& f,
               const Eigen::Ref<const Eigen::VectorXd>& g) const;

  Eigen::MatrixXd gram() const;
  double gram_deviation() const;

 private:
  Domain domain_;
  QuadratureGrid grid_;
  std::vector<EigenPair> pairs_;
  Eigen::MatrixXd values_;
  Eigen::MatrixXd weighted_;  // values_ scaled column-wise by the weights
};

SpectralBasis build_basis(const Domain& domain, GridSteps steps, const TruncationSpec& truncation,
                          const BasisOptions& options = {});

/// Columns: index, multi-index components, eigenvalue, normalization.
void write_basis_csv(std::ostream& os, const SpectralBasis& basis);
/// Columns: node_id, x, y, weight.
void write_grid_csv(std::ostream& os, const QuadratureGrid& grid);

}  // namespace hfanova
