#include "hfanova/gaussian_simulation.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "hfanova/error.hpp"
#include "hfanova/rng.hpp"

namespace hfanova {

Eigen::MatrixXd make_design(int n, int p, std::uint64_t seed) {
  if (p < 1 || n < p) throw DomainError("make_design needs n >= p >= 1");
  Rng rng(substream_seed(seed, {0x0de5u}));
  const Eigen::MatrixXd g = rng.normal_matrix(n, p);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  for (int j = 0; j < p; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

std::string to_string(BetaShape shape) {
  switch (shape) {
    case BetaShape::RectC1: return "RectC1";
    case BetaShape::RectC2: return "RectC2";
    case BetaShape::DiskC1: return "DiskC1";
    case BetaShape::DiskC2: return "DiskC2";
    case BetaShape::DiskC3: return "DiskC3";
    case BetaShape::SectC1: return "SectC1";
    case BetaShape::SectC2: return "SectC2";
    case BetaShape::SectC3: return "SectC3";
  }
  return "unknown";
}

BetaShape parse_beta_shape(const std::string& text) {
  for (auto s : {BetaShape::RectC1, BetaShape::RectC2, BetaShape::DiskC1, BetaShape::DiskC2,
                 BetaShape::DiskC3, BetaShape::SectC1, BetaShape::SectC2, BetaShape::SectC3}) {
    if (to_string(s) == text) return s;
  }
  throw ConfigError("unknown beta shape '" + text + "'");
}

double circular_beta_coefficient(BetaShape shape, int s, int k, int tr, int p, double radius,
                                 int n) {
  if (s < 1 || k < 1 || k > tr) throw DomainError("beta coefficient index out of range");
  const double kk = k;
  const double ss = s;
  const double ratio = kk / tr;
  const double P = 1.0 + ratio * ratio + std::pow((tr - kk + 1.0) / tr, 4.0);
  switch (shape) {
    case BetaShape::DiskC1: {
      const double sign = (s % 2 == 0) ? 1.0 : -1.0;
      return sign / std::pow(kk, 3.5) * std::exp(std::pow(ratio, 6.5 + 2.0 * ss)) *
                 std::pow(P, 1.5 + 2.0 * ss) +
             std::exp(std::pow(ratio, 5.5 + 2.0 * ss)) * std::pow(P, 2.5 + 2.0 * ss);
    }
    case BetaShape::DiskC2:
    case BetaShape::SectC2: {
      if (!(radius > 0.0) || n < 1) throw DomainError("C2 coefficients need R > 0 and n >= 1");
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      return std::exp((ss + kk / radius) / n) / radius +
             kk * std::cos(sign * 2.0 * std::numbers::pi * radius / kk);
    }
    case BetaShape::DiskC3:
      return std::pow(P, 0.5 + 2.0 * ss) / std::pow(kk, 1.5 + 2.0 * ss);
    case BetaShape::SectC1:
      return 1.0 + (kk - 1.0) * ss;
    case BetaShape::SectC3:
      return std::cos(std::numbers::pi * (tr - kk) / kk) *
             std::cos(std::numbers::pi * (p - ss) / ss);
    default:
      throw DomainError("shape " + to_string(shape) + " is not defined by coefficients");
  }
}

double rectangle_beta_value(BetaShape shape, const Rectangle& rect, int s, double x, double y) {
  const double l1 = rect.length1();
  const double l2 = rect.length2();
  const double xb = 0.5 * std::numbers::pi * (2.0 * s + 1.0) * (rect.b1 - x);
  const double yb = 0.5 * std::numbers::pi * (2.0 * s + 1.0) * (rect.b2 - y);
  switch (shape) {
    case BetaShape::RectC1:
      return std::sin(std::numbers::pi * s * xb / l1) * std::sin(std::numbers::pi * s * yb / l2);
    case BetaShape::RectC2:
      return std::cos((xb + (x - rect.a1)) / l1) * std::cos((yb + (y - rect.a2)) / l2);
    default:
      throw DomainError("shape " + to_string(shape) + " is not a rectangle shape");
  }
}

BetaTruth sample_beta(const SpectralBasis& basis, const BetaSpec& spec) {
  if (spec.p < 2) throw DomainError("beta needs p >= 2 components");
  const auto tr = static_cast<int>(basis.size());
  const auto& grid = basis.grid();
  BetaTruth truth;
  const bool rect_shape = spec.shape == BetaShape::RectC1 || spec.shape == BetaShape::RectC2;
  const bool disk_shape = spec.shape == BetaShape::DiskC1 || spec.shape == BetaShape::DiskC2 ||
                          spec.shape == BetaShape::DiskC3;
  if (const auto* rect = std::get_if<Rectangle>(&basis.domain())) {
    if (!rect_shape) throw DomainError("shape " + to_string(spec.shape) + " needs a rectangle");
    truth.fields.resize(spec.p, static_cast<Eigen::Index>(grid.size()));
    for (int s = 1; s <= spec.p; ++s) {
      for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(grid.size()); ++j) {
        truth.fields(s - 1, j) = rectangle_beta_value(spec.shape, *rect, s, grid.x[j], grid.y[j]);
      }
    }
    truth.coefficients = basis.project_rows(truth.fields).transpose();
    return truth;
  }
  const bool disk = std::holds_alternative<Disk>(basis.domain());
  if (rect_shape || disk != disk_shape) {
    throw DomainError("shape " + to_string(spec.shape) + " does not match the " +
                      domain_name(basis.domain()));
  }
  truth.coefficients.resize(tr, spec.p);
  for (int k = 1; k <= tr; ++k) {
    for (int s = 1; s <= spec.p; ++s) {
      truth.coefficients(k - 1, s - 1) =
          circular_beta_coefficient(spec.shape, s, k, tr, spec.p, spec.radius, spec.n);
    }
  }
  truth.fields = basis.reconstruct_rows(truth.coefficients.transpose());
  return truth;
}

ErrorSampler::ErrorSampler(const LambdaSequence& lambdas) : n_(lambdas.n()) {
  factors_.reserve(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const auto& m = lambdas[k];
    if (m.isZero(0.0)) {
      factors_.emplace_back(Eigen::MatrixXd::Zero(m.rows(), m.cols()));
      continue;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) validate_positive_definite(m, k + 1);
    factors_.emplace_back(llt.matrixL());
  }
}

Eigen::MatrixXd ErrorSampler::draw(std::uint64_t seed) const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd out(n, static_cast<Eigen::Index>(factors_.size()));
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    Rng rng(substream_seed(seed, {k}));
    const Eigen::VectorXd z = rng.normal_vector(n);
    out.col(static_cast<Eigen::Index>(k)) =
        factors_[k].triangularView<Eigen::Lower>() * z;
  }
  return out;
}

FunctionalSample sample_error(const LambdaSequence& lambdas, const SpectralBasis& basis,
                              std::uint64_t seed) {
  if (lambdas.size() != basis.size()) {
    throw DomainError("sample_error: Lambda sequence and basis have different truncation");
  }
  FunctionalSample sample;
  sample.coefficients = ErrorSampler(lambdas).draw(seed);
  sample.values = basis.reconstruct_rows(sample.coefficients);
  return sample;
}

Eigen::VectorXd sample_direction_coefficients(const Eigen::VectorXd& laplacian_eigenvalues,
                                              std::uint64_t seed) {
  Rng rng(substream_seed(seed, {0xd1ecu}));
  const Eigen::VectorXd z = rng.normal_vector(laplacian_eigenvalues.size());
  return z.cwiseQuotient(laplacian_eigenvalues);
}

Direction sample_direction(const SpectralBasis& basis, std::uint64_t seed) {
  Direction d;
  d.coefficients = sample_direction_coefficients(basis.eigenvalues(), seed);
  d.field = basis.reconstruct(d.coefficients);
  return d;
}

Eigen::MatrixXd make_response(const Eigen::MatrixXd& X, const Eigen::MatrixXd& beta,
                              const Eigen::MatrixXd& error) {
  if (X.cols() != beta.rows() || X.rows() != error.rows() || beta.cols() != error.cols()) {
    throw DomainError("make_response: shapes do not conform");
  }
  return X * beta + error;
}

}  // namespace hfanova
