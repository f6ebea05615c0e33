#pragma once

// Synthetic fMRI slices drawn from the functional model with tridiagonal
// Lambda_k, shared by the unit and acceptance suites.

#include <cstdint>

#include <Eigen/Core>

#include "hfanova/covariance_model.hpp"
#include "hfanova/fmri_design.hpp"
#include "hfanova/gaussian_simulation.hpp"
#include "hfanova/spectral_basis.hpp"

namespace hfanova::testing {

inline SpectralBasis slice_basis() {
  return build_basis(Rectangle{0.0, 1.0, 0.0, 1.0}, {0.05, 0.05}, RectangleTruncation{4, 4});
}

inline Eigen::MatrixXd slice_design() {
  return build_design(default_events(), GloverHrf{}, FrameTiming{});
}

// r0_k = 0.05 / k, r1_k = 0.35 r0_k.
inline LambdaSequence slice_lambdas(int tr, int n) {
  Eigen::VectorXd r0(tr);
  for (int k = 0; k < tr; ++k) r0[k] = 0.05 / (k + 1);
  return lambda_tridiagonal(r0, 0.35 * r0, n);
}

// TR x 2. The null truth repeats the hot column.
inline Eigen::MatrixXd slice_beta(int tr, bool null_truth) {
  Eigen::MatrixXd b(tr, 2);
  for (int k = 0; k < tr; ++k) {
    b(k, 0) = 1.0 / (k + 1);
    b(k, 1) = null_truth ? b(k, 0) : (k % 2 == 0 ? 1.6 : -0.8) / (k + 1);
  }
  return b;
}

// frames x nodes values of one slice.
inline Eigen::MatrixXd slice_values(const SpectralBasis& basis, const Eigen::MatrixXd& X,
                                    const Eigen::MatrixXd& beta, const ErrorSampler& noise,
                                    std::uint64_t seed) {
  const Eigen::MatrixXd coefficients = X * beta.transpose() + noise.draw(seed);
  return basis.reconstruct_rows(coefficients);
}

}  // namespace hfanova::testing
