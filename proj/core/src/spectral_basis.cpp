#include "hfanova/spectral_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <tuple>

#include "hfanova/bessel.hpp"
#include "hfanova/csv.hpp"
#include "hfanova/error.hpp"

namespace hfanova {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::tuple<int, int, int> key(const MultiIndex& index) {
  return std::visit(Overloaded{
                        [](const RectangleIndex& i) { return std::tuple{i.k1, i.k2, 0}; },
                        [](const DiskIndex& i) {
                          return std::tuple{i.order, i.root, i.parity == Parity::Cos ? 0 : 1};
                        },
                        [](const SectorIndex& i) { return std::tuple{i.k, i.root, 0}; },
                    },
                    index);
}

void sort_pairs(std::vector<EigenPair>& pairs) {
  std::stable_sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) {
    const double scale = std::max(std::abs(a.eigenvalue), std::abs(b.eigenvalue));
    if (std::abs(a.eigenvalue - b.eigenvalue) > 1e-12 * scale) return a.eigenvalue < b.eigenvalue;
    return key(a.index) < key(b.index);
  });
}

void check_cap(std::size_t requested, const BasisOptions& options) {
  if (requested > options.max_pairs) {
    throw DomainError("truncation of " + std::to_string(requested) +
                      " eigenpairs exceeds the cap of " + std::to_string(options.max_pairs));
  }
}

EigenPair rectangle_pair(const Rectangle& rect, int k1, int k2) {
  const double l1 = rect.length1();
  const double l2 = rect.length2();
  const double pi2 = std::numbers::pi * std::numbers::pi;
  EigenPair pair;
  pair.index = RectangleIndex{k1, k2};
  pair.eigenvalue = pi2 * (static_cast<double>(k1) * k1 / (l1 * l1) +
                           static_cast<double>(k2) * k2 / (l2 * l2));
  pair.normalization = 2.0 / std::sqrt(l1 * l2);
  return pair;
}

EigenPair disk_pair(double radius, int order, int root, Parity parity, double zero) {
  EigenPair pair;
  pair.index = DiskIndex{order, root, parity};
  pair.bessel_order = order;
  pair.bessel_zero = zero;
  pair.eigenvalue = zero * zero / (radius * radius);
  const double jn1 = std::abs(bessel_j(order + 1.0, zero));
  pair.normalization = order == 0 ? 1.0 / (radius * std::sqrt(std::numbers::pi) * jn1)
                                  : std::sqrt(2.0 / std::numbers::pi) / (radius * jn1);
  return pair;
}

EigenPair sector_pair(const CircularSector& s, int k, int root, double zero) {
  const double nu = k / s.theta;
  EigenPair pair;
  pair.index = SectorIndex{k, root};
  pair.bessel_order = nu;
  pair.bessel_zero = zero;
  pair.eigenvalue = zero * zero / (s.radius * s.radius);
  const double jn1 = std::abs(bessel_j(nu + 1.0, zero));
  pair.normalization = 2.0 / (s.radius * jn1 * std::sqrt(s.angle()));
  return pair;
}

std::vector<EigenPair> rectangle_pairs(const Rectangle& rect, const TruncationSpec& truncation,
                                       const BasisOptions& options) {
  std::vector<EigenPair> pairs;
  if (const auto* block = std::get_if<RectangleTruncation>(&truncation)) {
    if (block->tr1 < 1 || block->tr2 < 1) throw DomainError("rectangle truncation must be >= 1");
    check_cap(static_cast<std::size_t>(block->tr1) * static_cast<std::size_t>(block->tr2), options);
    for (int k1 = 1; k1 <= block->tr1; ++k1) {
      for (int k2 = 1; k2 <= block->tr2; ++k2) pairs.push_back(rectangle_pair(rect, k1, k2));
    }
    sort_pairs(pairs);
    return pairs;
  }
  if (const auto* global = std::get_if<GlobalTruncation>(&truncation)) {
    if (global->count < 1) throw DomainError("global truncation count must be >= 1");
    check_cap(static_cast<std::size_t>(global->count), options);
    // Every multi-index below (k1, k2) has a smaller eigenvalue, so members of
    // the leading `count` satisfy k1 * k2 <= count.
    for (int k1 = 1; k1 <= global->count; ++k1) {
      for (int k2 = 1; k1 * k2 <= global->count; ++k2) {
        pairs.push_back(rectangle_pair(rect, k1, k2));
      }
    }
    sort_pairs(pairs);
    pairs.resize(static_cast<std::size_t>(global->count));
    return pairs;
  }
  throw DomainError("circular truncation does not apply to a rectangle");
}

std::vector<EigenPair> disk_pairs(const Disk& disk, const TruncationSpec& truncation,
                                  const BasisOptions& options) {
  std::vector<EigenPair> pairs;
  if (const auto* circ = std::get_if<CircularTruncation>(&truncation)) {
    if (circ->radial_roots < 1) throw DomainError("radial root count must be >= 1");
    check_cap(static_cast<std::size_t>(circ->radial_roots), options);
    const int order = circ->angular_index < 0 ? 0 : circ->angular_index;
    if (order == 0 && circ->parity == Parity::Sin) {
      throw DomainError("order 0 disk modes have no sine parity");
    }
    const auto zeros = bessel_j_zeros(order, circ->radial_roots);
    for (int h = 1; h <= circ->radial_roots; ++h) {
      pairs.push_back(disk_pair(disk.radius, order, h, circ->parity, zeros[h - 1]));
    }
    return pairs;
  }
  if (const auto* global = std::get_if<GlobalTruncation>(&truncation)) {
    if (global->count < 1) throw DomainError("global truncation count must be >= 1");
    check_cap(static_cast<std::size_t>(global->count), options);
    // Zeros increase in both order and root index, so (order + 1) * root <= count.
    for (int order = 0; order < global->count; ++order) {
      const int roots = global->count / (order + 1);
      if (roots < 1) break;
      const auto zeros = bessel_j_zeros(order, roots);
      for (int h = 1; h <= roots; ++h) {
        pairs.push_back(disk_pair(disk.radius, order, h, Parity::Cos, zeros[h - 1]));
        if (order > 0) pairs.push_back(disk_pair(disk.radius, order, h, Parity::Sin, zeros[h - 1]));
      }
    }
    sort_pairs(pairs);
    pairs.resize(static_cast<std::size_t>(global->count));
    return pairs;
  }
  throw DomainError("rectangle truncation does not apply to a disk");
}

std::vector<EigenPair> sector_pairs(const CircularSector& sector, const TruncationSpec& truncation,
                                    const BasisOptions& options) {
  std::vector<EigenPair> pairs;
  if (const auto* circ = std::get_if<CircularTruncation>(&truncation)) {
    if (circ->radial_roots < 1) throw DomainError("radial root count must be >= 1");
    check_cap(static_cast<std::size_t>(circ->radial_roots), options);
    const int k = circ->angular_index < 1 ? 1 : circ->angular_index;
    const auto zeros = bessel_j_zeros(k / sector.theta, circ->radial_roots);
    for (int h = 1; h <= circ->radial_roots; ++h) {
      pairs.push_back(sector_pair(sector, k, h, zeros[h - 1]));
    }
    return pairs;
  }
  if (const auto* global = std::get_if<GlobalTruncation>(&truncation)) {
    if (global->count < 1) throw DomainError("global truncation count must be >= 1");
    check_cap(static_cast<std::size_t>(global->count), options);
    for (int k = 1; k <= global->count; ++k) {
      const int roots = global->count / k;
      if (roots < 1) break;
      const auto zeros = bessel_j_zeros(k / sector.theta, roots);
      for (int h = 1; h <= roots; ++h) pairs.push_back(sector_pair(sector, k, h, zeros[h - 1]));
    }
    sort_pairs(pairs);
    pairs.resize(static_cast<std::size_t>(global->count));
    return pairs;
  }
  throw DomainError("rectangle truncation does not apply to a circular sector");
}

double angular_factor(const Domain& domain, const EigenPair& pair, double phi) {
  if (const auto* idx = std::get_if<DiskIndex>(&pair.index)) {
    return idx->parity == Parity::Cos ? std::cos(idx->order * phi) : std::sin(idx->order * phi);
  }
  const auto& sector = std::get<CircularSector>(domain);
  const auto& idx = std::get<SectorIndex>(pair.index);
  return std::sin(idx.k * phi / sector.theta);
}

}  // namespace

std::vector<EigenPair> eigenpairs(const Domain& domain, const TruncationSpec& truncation,
                                  const BasisOptions& options) {
  validate(domain);
  return std::visit(Overloaded{
                        [&](const Rectangle& r) { return rectangle_pairs(r, truncation, options); },
                        [&](const Disk& d) { return disk_pairs(d, truncation, options); },
                        [&](const CircularSector& s) { return sector_pairs(s, truncation, options); },
                    },
                    domain);
}

double eigenfunction(const Domain& domain, const EigenPair& pair, double first, double second) {
  if (const auto* rect = std::get_if<Rectangle>(&domain)) {
    const auto& idx = std::get<RectangleIndex>(pair.index);
    return pair.normalization *
           std::sin(std::numbers::pi * idx.k1 * (first - rect->a1) / rect->length1()) *
           std::sin(std::numbers::pi * idx.k2 * (second - rect->a2) / rect->length2());
  }
  const double radius = std::holds_alternative<Disk>(domain)
                            ? std::get<Disk>(domain).radius
                            : std::get<CircularSector>(domain).radius;
  return pair.normalization * bessel_j(pair.bessel_order, pair.bessel_zero * first / radius) *
         angular_factor(domain, pair, second);
}

std::string describe(const MultiIndex& index) {
  return std::visit(Overloaded{
                        [](const RectangleIndex& i) {
                          return "(" + std::to_string(i.k1) + "," + std::to_string(i.k2) + ")";
                        },
                        [](const DiskIndex& i) {
                          return "(" + std::to_string(i.order) + "," + std::to_string(i.root) +
                                 "," + (i.parity == Parity::Cos ? "cos" : "sin") + ")";
                        },
                        [](const SectorIndex& i) {
                          return "(" + std::to_string(i.k) + "," + std::to_string(i.root) + ")";
                        },
                    },
                    index);
}

SpectralBasis::SpectralBasis(Domain domain, QuadratureGrid grid, std::vector<EigenPair> pairs)
    : domain_(std::move(domain)), grid_(std::move(grid)), pairs_(std::move(pairs)) {
  const auto tr = static_cast<Eigen::Index>(pairs_.size());
  const auto nodes = static_cast<Eigen::Index>(grid_.size());
  values_.resize(tr, nodes);

  if (const auto* rect = std::get_if<Rectangle>(&domain_)) {
    // Separable: evaluate each sine factor once per axis.
    const auto n1 = static_cast<Eigen::Index>(grid_.count1);
    const auto n2 = static_cast<Eigen::Index>(grid_.count2);
    for (Eigen::Index k = 0; k < tr; ++k) {
      const auto& pair = pairs_[static_cast<std::size_t>(k)];
      const auto& idx = std::get<RectangleIndex>(pair.index);
      Eigen::VectorXd sx(n1);
      Eigen::VectorXd sy(n2);
      for (Eigen::Index i = 0; i < n1; ++i) {
        sx[i] = std::sin(std::numbers::pi * idx.k1 * (grid_.x[i] - rect->a1) / rect->length1());
      }
      for (Eigen::Index j = 0; j < n2; ++j) {
        sy[j] = std::sin(std::numbers::pi * idx.k2 * (grid_.y[j * n1] - rect->a2) /
                         rect->length2());
      }
      for (Eigen::Index j = 0; j < n2; ++j) {
        values_.row(k).segment(j * n1, n1) = (pair.normalization * sy[j]) * sx.transpose();
      }
    }
  } else {
    const double radius = std::holds_alternative<Disk>(domain_)
                              ? std::get<Disk>(domain_).radius
                              : std::get<CircularSector>(domain_).radius;
    const auto nr = static_cast<Eigen::Index>(grid_.count1);
    const auto nphi = static_cast<Eigen::Index>(grid_.count2);
    for (Eigen::Index k = 0; k < tr; ++k) {
      const auto& pair = pairs_[static_cast<std::size_t>(k)];
      Eigen::VectorXd radial(nr);
      Eigen::VectorXd angular(nphi);
      for (Eigen::Index j = 0; j < nr; ++j) {
        radial[j] = bessel_j(pair.bessel_order, pair.bessel_zero * grid_.r[j * nphi] / radius);
      }
      for (Eigen::Index m = 0; m < nphi; ++m) {
        angular[m] = angular_factor(domain_, pair, grid_.phi[m]);
      }
      for (Eigen::Index j = 0; j < nr; ++j) {
        values_.row(k).segment(j * nphi, nphi) =
            (pair.normalization * radial[j]) * angular.transpose();
      }
    }
  }
  weighted_ = values_ * grid_.weight.asDiagonal();
}

Eigen::VectorXd SpectralBasis::eigenvalues() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(pairs_.size()));
  for (std::size_t k = 0; k < pairs_.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = pairs_[k].eigenvalue;
  }
  return out;
}

Eigen::VectorXd SpectralBasis::project(const Eigen::Ref<const Eigen::VectorXd>& field) const {
  if (field.size() != values_.cols()) {
    throw DomainError("project: field has " + std::to_string(field.size()) +
                      " values, grid has " + std::to_string(values_.cols()));
  }
  return weighted_ * field;
}

Eigen::MatrixXd SpectralBasis::project_rows(const Eigen::Ref<const Eigen::MatrixXd>& fields) const {
  if (fields.cols() != values_.cols()) {
    throw DomainError("project_rows: fields have " + std::to_string(fields.cols()) +
                      " columns, grid has " + std::to_string(values_.cols()));
  }
  return fields * weighted_.transpose();
}

Eigen::VectorXd SpectralBasis::reconstruct(
    const Eigen::Ref<const Eigen::VectorXd>& coefficients) const {
  if (coefficients.size() != values_.rows()) {
    throw DomainError("reconstruct: expected " + std::to_string(values_.rows()) +
                      " coefficients, got " + std::to_string(coefficients.size()));
  }
  return values_.transpose() * coefficients;
}

Eigen::MatrixXd SpectralBasis::reconstruct_rows(
    const Eigen::Ref<const Eigen::MatrixXd>& coefficients) const {
  if (coefficients.cols() != values_.rows()) {
    throw DomainError("reconstruct_rows: expected " + std::to_string(values_.rows()) +
                      " coefficient columns, got " + std::to_string(coefficients.cols()));
  }
  return coefficients * values_;
}

double SpectralBasis::inner(const Eigen::Ref<const Eigen::VectorXd>& f,
                            const Eigen::Ref<const Eigen::VectorXd>& g) const {
  if (f.size() != values_.cols() || g.size() != values_.cols()) {
    throw DomainError("inner: field length does not match the grid");
  }
  return (f.array() * g.array() * grid_.weight.array()).sum();
}

Eigen::MatrixXd SpectralBasis::gram() const { return weighted_ * values_.transpose(); }

double SpectralBasis::gram_deviation() const {
  const Eigen::MatrixXd g = gram();
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

SpectralBasis build_basis(const Domain& domain, GridSteps steps, const TruncationSpec& truncation,
                          const BasisOptions& options) {
  auto pairs = eigenpairs(domain, truncation, options);
  auto grid = make_grid(domain, steps);
  return SpectralBasis(domain, std::move(grid), std::move(pairs));
}

void write_basis_csv(std::ostream& os, const SpectralBasis& basis) {
  const bool rect = std::holds_alternative<Rectangle>(basis.domain());
  const bool disk = std::holds_alternative<Disk>(basis.domain());
  if (rect) {
    csv_row(os, "index", "k1", "k2", "laplacian_eigenvalue", "normalization");
  } else if (disk) {
    csv_row(os, "index", "order", "root", "parity", "laplacian_eigenvalue", "normalization");
  } else {
    csv_row(os, "index", "k", "root", "laplacian_eigenvalue", "normalization");
  }
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto& p = basis.pairs()[k];
    if (const auto* i = std::get_if<RectangleIndex>(&p.index)) {
      csv_row(os, k + 1, i->k1, i->k2, p.eigenvalue, p.normalization);
    } else if (const auto* d = std::get_if<DiskIndex>(&p.index)) {
      csv_row(os, k + 1, d->order, d->root, d->parity == Parity::Cos ? "cos" : "sin",
              p.eigenvalue, p.normalization);
    } else {
      const auto& s = std::get<SectorIndex>(p.index);
      csv_row(os, k + 1, s.k, s.root, p.eigenvalue, p.normalization);
    }
  }
}

void write_grid_csv(std::ostream& os, const QuadratureGrid& grid) {
  csv_row(os, "node_id", "x", "y", "weight");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    csv_row(os, j, grid.x[i], grid.y[i], grid.weight[i]);
  }
}

}  // namespace hfanova
