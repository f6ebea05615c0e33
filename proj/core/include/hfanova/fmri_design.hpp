#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hfanova/covariance_model.hpp"
#include "hfanova/cramer_wold.hpp"
#include "hfanova/fanova.hpp"
#include "hfanova/gls_estimator.hpp"
#include "hfanova/spectral_basis.hpp"

namespace hfanova {

/// Glover difference-of-gammas parameters (seconds, dip dimensionless).
struct HrfSpec {
  double peak1 = 5.4;
  double fwhm1 = 5.2;
  double peak2 = 10.8;
  double fwhm2 = 7.35;
  double dip = 0.35;
};

void validate(const HrfSpec& spec);

struct GammaShape {
  double shape = 1.0;
  double scale = 1.0;

  double mode() const { return (shape - 1.0) * scale; }
  double density(double t) const;
  double cdf(double t) const;
};

/// Shape and scale with the given mode and full width at half maximum.
GammaShape gamma_from_peak_fwhm(double peak, double fwhm);

/// Measured full width at half maximum of a gamma density.
double gamma_fwhm(const GammaShape& g);

class GloverHrf {
 public:
  explicit GloverHrf(const HrfSpec& spec = {});

  double operator()(double t) const;
  /// Exact integral of the response over [t0, t1].
  double integral(double t0, double t1) const;
  Eigen::VectorXd sample(const Eigen::VectorXd& times) const;

  const GammaShape& first() const { return g1_; }
  const GammaShape& second() const { return g2_; }
  const HrfSpec& spec() const { return spec_; }

 private:
  HrfSpec spec_;
  GammaShape g1_;
  GammaShape g2_;
  double max1_ = 1.0;
  double max2_ = 1.0;
};

struct Event {
  int type = 1;
  double onset = 0.0;
  double duration = 0.0;
  double height = 1.0;
};

/// Eight blocks alternating hot (type 1, height 0.5) and warm (type 2, height 1).
std::vector<Event> default_events();
/// Header-less CSV: type, onset, duration, height.
std::vector<Event> read_events_csv(std::istream& is);

struct FrameTiming {
  double repetition_time = 5.0;
  int frames = 68;
  int drop_first = 4;

  int effective() const { return frames - drop_first; }
  double frame_time(int frame) const { return frame * repetition_time; }
};

struct DesignOptions {
  double step = 0.1;          // internal convolution resolution in seconds
  bool linear_drift = false;  // appends a centred linear ramp column
};

/// One column per event type (ascending type id), rows are the kept frames.
/// Each column is the boxcar of its events convolved with the hrf on a grid
/// of `step` seconds; the hrf is integrated exactly over every grid cell.
Eigen::MatrixXd build_design(const std::vector<Event>& events, const GloverHrf& hrf,
                             const FrameTiming& timing, const DesignOptions& options = {});

struct SliceFitOptions {
  int directions = 8;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  /// Rotate to the eigenvectors of the projected lag-zero residual covariance
  /// before estimating Lambda.
  bool empirical_eigenbasis = true;
  /// Columns of the design compared by the test; 0 means all of them.
  int contrast_columns = 0;
  QForm q_form = QForm::Gls;
};

struct SliceReport {
  GlsFit pilot;
  GlsFit fit;  // beta in the working basis
  EmpiricalEstimate covariance;
  Eigen::MatrixXd rotation;  // TR x TR, identity without the eigenbasis step
  FanovaResult fanova;
  std::vector<TestReport> tests;
};

/// OLS pilot, empirical Lambda from the pilot residuals, GLS refit, FANOVA and
/// the projected test along `directions` random directions.
SliceReport fit_slice(const Eigen::MatrixXd& X, const Eigen::MatrixXd& response_values,
                      const SpectralBasis& basis, const SliceFitOptions& options = {});

/// Volume CSV: (frame, node, value) or (slice, frame, node, value). Returns
/// one frames x nodes matrix per slice.
std::map<int, Eigen::MatrixXd> read_volume_csv(std::istream& is, int nodes);

}  // namespace hfanova
