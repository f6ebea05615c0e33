#include "hfanova/fmri_design.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <set>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/roots.hpp>

#include "hfanova/csv.hpp"
#include "hfanova/error.hpp"
#include "hfanova/gaussian_simulation.hpp"
#include "hfanova/rng.hpp"
#include "hfanova/special_functions.hpp"

namespace hfanova {
namespace {

template <class F>
double solve_bracketed(F f, double lo, double hi, const char* what) {
  boost::uintmax_t iterations = 200;
  const auto tol = boost::math::tools::eps_tolerance<double>(50);
  try {
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, iterations);
    return 0.5 * (r.first + r.second);
  } catch (const std::exception&) {
    throw RootNotFound(what, lo, hi);
  }
}

// Roots u1 < 1 < u2 of (a-1)(ln u - u + 1) = -ln 2, i.e. where a gamma density
// drops to half its peak, relative to the mode. Solved in v = ln u.
std::pair<double, double> half_max_ratios(double shape) {
  const double c = -std::numbers::ln2 / (shape - 1.0);
  const auto g = [c](double v) { return v - std::exp(v) + 1.0 - c; };
  const double v1 = solve_bracketed(g, c - 2.0, 0.0, "gamma half maximum (rising side)");
  double hi = 1.0;
  while (g(hi) > 0.0) hi *= 2.0;
  const double v2 = solve_bracketed(g, 0.0, hi, "gamma half maximum (falling side)");
  return {std::exp(v1), std::exp(v2)};
}

}  // namespace

void validate(const HrfSpec& spec) {
  if (!(spec.peak1 > 0.0 && spec.peak2 > 0.0 && spec.fwhm1 > 0.0 && spec.fwhm2 > 0.0)) {
    throw DomainError("hrf peaks and widths must be positive");
  }
  if (!(spec.dip >= 0.0 && spec.dip <= 1.0)) throw DomainError("hrf dip must lie in [0, 1]");
}

double GammaShape::density(double t) const {
  if (t <= 0.0) return 0.0;
  return std::exp((shape - 1.0) * std::log(t) - t / scale - std::lgamma(shape) -
                  shape * std::log(scale));
}

double GammaShape::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  return regularized_gamma_p(shape, t / scale);
}

double gamma_fwhm(const GammaShape& g) {
  const auto [u1, u2] = half_max_ratios(g.shape);
  return g.mode() * (u2 - u1);
}

GammaShape gamma_from_peak_fwhm(double peak, double fwhm) {
  if (!(peak > 0.0) || !(fwhm > 0.0)) throw DomainError("gamma peak and width must be positive");
  const double target = fwhm / peak;
  // Relative width decreases monotonically in the shape; search log(shape - 1).
  const auto f = [target](double log_excess) {
    const auto [u1, u2] = half_max_ratios(1.0 + std::exp(log_excess));
    return (u2 - u1) - target;
  };
  const double log_excess = solve_bracketed(f, std::log(1e-3), std::log(1e9), "gamma shape");
  GammaShape g;
  g.shape = 1.0 + std::exp(log_excess);
  g.scale = peak / (g.shape - 1.0);
  return g;
}

GloverHrf::GloverHrf(const HrfSpec& spec) : spec_(spec) {
  validate(spec);
  g1_ = gamma_from_peak_fwhm(spec.peak1, spec.fwhm1);
  g2_ = gamma_from_peak_fwhm(spec.peak2, spec.fwhm2);
  max1_ = g1_.density(g1_.mode());
  max2_ = g2_.density(g2_.mode());
}

double GloverHrf::operator()(double t) const {
  return g1_.density(t) / max1_ - spec_.dip * g2_.density(t) / max2_;
}

double GloverHrf::integral(double t0, double t1) const {
  return (g1_.cdf(t1) - g1_.cdf(t0)) / max1_ - spec_.dip * (g2_.cdf(t1) - g2_.cdf(t0)) / max2_;
}

Eigen::VectorXd GloverHrf::sample(const Eigen::VectorXd& times) const {
  Eigen::VectorXd out(times.size());
  for (Eigen::Index i = 0; i < times.size(); ++i) out[i] = (*this)(times[i]);
  return out;
}

std::vector<Event> default_events() {
  std::vector<Event> events;
  for (int b = 0; b < 8; ++b) {
    const bool hot = b % 2 == 0;
    events.push_back(Event{hot ? 1 : 2, 20.0 + 40.0 * b, 5.0, hot ? 0.5 : 1.0});
  }
  return events;
}

std::vector<Event> read_events_csv(std::istream& is) {
  std::vector<Event> events;
  for (const auto& rec : read_csv(is)) {
    if (rec.size() != 4) throw ConfigError("events rows need 4 columns: type,onset,duration,height");
    Event e;
    e.type = static_cast<int>(parse_integer(rec[0]));
    e.onset = parse_double(rec[1]);
    e.duration = parse_double(rec[2]);
    e.height = parse_double(rec[3]);
    if (!(e.duration > 0.0)) throw ConfigError("event durations must be positive");
    events.push_back(e);
  }
  return events;
}

Eigen::MatrixXd build_design(const std::vector<Event>& events, const GloverHrf& hrf,
                             const FrameTiming& timing, const DesignOptions& options) {
  if (timing.frames < 1 || timing.drop_first < 0 || timing.drop_first >= timing.frames ||
      !(timing.repetition_time > 0.0)) {
    throw DomainError("invalid frame timing");
  }
  if (!(options.step > 0.0)) throw DomainError("convolution step must be positive");
  std::set<int> type_set;
  for (const auto& e : events) type_set.insert(e.type);
  const std::vector<int> types(type_set.begin(), type_set.end());

  const double step = options.step;
  const double end = timing.frame_time(timing.frames - 1);
  const auto bins = static_cast<Eigen::Index>(std::llround(end / step));

  // Stimulus: boxcar height times the covered fraction of every bin.
  Eigen::MatrixXd stimulus = Eigen::MatrixXd::Zero(bins, static_cast<Eigen::Index>(types.size()));
  for (const auto& e : events) {
    if (!(e.duration > 0.0)) throw DomainError("event durations must be positive");
    const auto col = std::distance(types.begin(), std::find(types.begin(), types.end(), e.type));
    double start = std::max(0.0, e.onset);
    double stop = e.onset + e.duration;
    if (stop > end || e.onset < 0.0) {
      std::clog << "hfanova: WARNING event at " << e.onset << " s truncated to the scan window\n";
      stop = std::min(stop, end);
    }
    if (stop <= start) continue;
    const auto first = static_cast<Eigen::Index>(std::floor(start / step));
    const auto last = std::min<Eigen::Index>(bins - 1, static_cast<Eigen::Index>(std::ceil(stop / step)));
    for (Eigen::Index m = first; m <= last; ++m) {
      const double lo = std::max(start, m * step);
      const double hi = std::min(stop, (m + 1) * step);
      if (hi > lo) stimulus(m, col) += e.height * (hi - lo) / step;
    }
  }

  // kernel[m] = integral of the hrf over [m step, (m+1) step].
  Eigen::VectorXd kernel(bins);
  for (Eigen::Index m = 0; m < bins; ++m) kernel[m] = hrf.integral(m * step, (m + 1) * step);

  const int rows = timing.effective();
  const auto cols = static_cast<Eigen::Index>(types.size()) + (options.linear_drift ? 1 : 0);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const double t = timing.frame_time(r + timing.drop_first);
    const auto n = static_cast<Eigen::Index>(std::llround(t / step));
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(types.size()); ++c) {
      double acc = 0.0;
      for (Eigen::Index m = 0; m < n; ++m) acc += stimulus(m, c) * kernel[n - 1 - m];
      X(r, c) = acc;
    }
  }
  if (options.linear_drift) {
    const double t0 = timing.frame_time(timing.drop_first);
    const double t1 = timing.frame_time(timing.frames - 1);
    for (int r = 0; r < rows; ++r) {
      const double t = timing.frame_time(r + timing.drop_first);
      X(r, cols - 1) = t1 > t0 ? (2.0 * t - t0 - t1) / (t1 - t0) : 0.0;
    }
  }
  return X;
}

SliceReport fit_slice(const Eigen::MatrixXd& X, const Eigen::MatrixXd& response_values,
                      const SpectralBasis& basis, const SliceFitOptions& options) {
  const auto n = X.rows();
  const auto tr = static_cast<Eigen::Index>(basis.size());
  if (response_values.rows() != n) {
    throw DomainError("fit_slice: design has " + std::to_string(n) + " rows, response has " +
                      std::to_string(response_values.rows()));
  }
  const Eigen::MatrixXd coefficients = basis.project_rows(response_values);

  LambdaSequence identity;
  identity.kind = LambdaKind::TheoreticalTridiagonal;
  identity.matrices.assign(static_cast<std::size_t>(tr), Eigen::MatrixXd::Identity(n, n));
  SliceReport report;
  report.pilot = fit(GlsSolver(X, identity), coefficients);

  report.rotation = Eigen::MatrixXd::Identity(tr, tr);
  if (options.empirical_eigenbasis) {
    const Eigen::MatrixXd r0 = report.pilot.residual_coefficients.transpose() *
                               report.pilot.residual_coefficients / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r0);
    report.rotation = eig.eigenvectors().rowwise().reverse();
    // Fix signs so the rotation is a deterministic function of the data.
    for (Eigen::Index j = 0; j < tr; ++j) {
      Eigen::Index arg = 0;
      report.rotation.col(j).cwiseAbs().maxCoeff(&arg);
      if (report.rotation(arg, j) < 0.0) report.rotation.col(j) *= -1.0;
    }
  }
  const Eigen::MatrixXd rotated = coefficients * report.rotation;
  report.covariance =
      estimate_empirical(report.pilot.residual_coefficients * report.rotation);
  const GlsSolver solver(X, report.covariance.lambdas);
  GlsFit rotated_fit = fit(solver, rotated);
  report.fit.provenance = LambdaKind::Empirical;
  report.fit.beta_coefficients = report.rotation * rotated_fit.beta_coefficients;
  report.fit.fitted_coefficients = rotated_fit.fitted_coefficients * report.rotation.transpose();
  report.fit.residual_coefficients = coefficients - report.fit.fitted_coefficients;
  report.fit.beta_fields = basis.reconstruct_rows(report.fit.beta_coefficients.transpose());

  report.fanova = decompose(solver, rotated, build_w(report.covariance.lambdas));

  const int columns = options.contrast_columns > 0 ? options.contrast_columns
                                                   : static_cast<int>(X.cols());
  if (columns < 2 || columns > X.cols()) throw DomainError("contrast needs 2..p design columns");
  ContrastSpec contrast;
  contrast.K = Eigen::MatrixXd::Zero(columns - 1, X.cols());
  contrast.K.leftCols(columns) = ContrastSpec::equal_components(columns).K;
  contrast.C = Eigen::VectorXd::Zero(columns - 1);

  const Eigen::VectorXd eigenvalues = basis.eigenvalues();
  for (int d = 0; d < options.directions; ++d) {
    const auto seed = substream_seed(options.seed, {static_cast<std::uint64_t>(d)});
    const Eigen::VectorXd h = report.rotation.transpose() *
                              sample_direction_coefficients(eigenvalues, seed);
    ProjectedTest test(X, h, report.covariance.lambdas, contrast, options.q_form);
    TestReport t = test.run(rotated, options.alpha);
    t.direction_seed = seed;
    report.tests.push_back(t);
  }
  return report;
}

std::map<int, Eigen::MatrixXd> read_volume_csv(std::istream& is, int nodes) {
  if (nodes < 1) throw ConfigError("volume needs a positive node count");
  std::map<int, std::map<long long, Eigen::VectorXd>> slices;
  for (const auto& rec : read_csv(is)) {
    if (rec.size() != 3 && rec.size() != 4) {
      throw ConfigError("volume rows need (frame,node,value) or (slice,frame,node,value)");
    }
    if (!is_numeric_record(rec)) continue;  // header
    const std::size_t o = rec.size() == 4 ? 1 : 0;
    const int slice = o == 1 ? static_cast<int>(parse_integer(rec[0])) : 0;
    const auto frame = parse_integer(rec[o]);
    const auto node = parse_integer(rec[o + 1]);
    if (node < 0 || node >= nodes) {
      throw ConfigError("volume node " + std::to_string(node) + " outside 0.." +
                        std::to_string(nodes - 1));
    }
    auto& row = slices[slice][frame];
    if (row.size() == 0) row = Eigen::VectorXd::Constant(nodes, std::numeric_limits<double>::quiet_NaN());
    row[node] = parse_double(rec[o + 2]);
  }
  std::map<int, Eigen::MatrixXd> out;
  for (const auto& [slice, frames] : slices) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(frames.size()), nodes);
    Eigen::Index r = 0;
    for (const auto& [frame, row] : frames) {
      if (row.hasNaN()) {
        throw ConfigError("volume slice " + std::to_string(slice) + " frame " +
                          std::to_string(frame) + " is missing nodes");
      }
      m.row(r++) = row.transpose();
    }
    out.emplace(slice, std::move(m));
  }
  if (out.empty()) throw ConfigError("volume file has no data rows");
  return out;
}

}  // namespace hfanova
