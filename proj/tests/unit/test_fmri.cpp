#include <doctest.h>

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hfanova/error.hpp"
#include "hfanova/fmri_design.hpp"
#include "synthetic_slice.hpp"

using namespace hfanova;

TEST_CASE("gamma shape from peak and width") {
  for (auto [peak, fwhm] : {std::pair{5.4, 5.2}, std::pair{10.8, 7.35}, std::pair{3.0, 2.0}}) {
    const auto g = gamma_from_peak_fwhm(peak, fwhm);
    CHECK(g.mode() == doctest::Approx(peak).epsilon(0.01));
    CHECK(gamma_fwhm(g) == doctest::Approx(fwhm).epsilon(0.01));
    CHECK(g.density(g.mode()) > g.density(0.9 * g.mode()));
    CHECK(g.density(g.mode()) > g.density(1.1 * g.mode()));
  }
  CHECK_THROWS_AS(gamma_from_peak_fwhm(-1.0, 2.0), DomainError);
}

TEST_CASE("hrf shape") {
  const GloverHrf hrf;
  CHECK(hrf(0.0) == 0.0);
  CHECK(hrf(-1.0) == 0.0);
  double best = 0.0, arg = 0.0;
  for (double t = 0.0; t <= 30.0; t += 0.01) {
    if (hrf(t) > best) {
      best = hrf(t);
      arg = t;
    }
  }
  CHECK(arg == doctest::Approx(5.4).epsilon(0.2 / 5.4));
  CHECK(best == doctest::Approx(1.0 - 0.35 * hrf.second().density(arg) / hrf.second().density(hrf.second().mode()))
                    .epsilon(0.05));
  CHECK(hrf(12.0) < 0.0);
  CHECK(std::abs(hrf(60.0)) < 1e-3);
  HrfSpec bad;
  bad.dip = 1.5;
  CHECK_THROWS_AS(GloverHrf{bad}, DomainError);
}

TEST_CASE("exact cell integral") {
  const GloverHrf hrf;
  boost::math::quadrature::gauss_kronrod<double, 61> gk;
  for (auto [a, b] : {std::pair{0.0, 0.1}, std::pair{4.0, 9.0}, std::pair{11.3, 25.0}}) {
    const double ref = gk.integrate([&](double t) { return hrf(t); }, a, b, 15, 1e-13);
    CHECK(hrf.integral(a, b) == doctest::Approx(ref).epsilon(1e-10).scale(1e-12));
  }
}

TEST_CASE("design without events has no columns") {
  const auto X = build_design({}, GloverHrf{}, FrameTiming{});
  CHECK(X.rows() == 64);
  CHECK(X.cols() == 0);
  DesignOptions drift;
  drift.linear_drift = true;
  const auto D = build_design({}, GloverHrf{}, FrameTiming{}, drift);
  CHECK(D.cols() == 1);
  CHECK(D(0, 0) == doctest::Approx(-1.0));
  CHECK(D(63, 0) == doctest::Approx(1.0));
}

TEST_CASE("impulse response and block oracle") {
  const GloverHrf hrf;
  const FrameTiming timing;
  const double onset = 40.0;
  const auto impulse = build_design({Event{1, onset, 0.1, 1.0}}, hrf, timing);
  boost::math::quadrature::gauss_kronrod<double, 61> gk;
  const auto block = build_design({Event{1, onset, 5.0, 1.0}}, hrf, timing);
  for (int r = 0; r < timing.effective(); ++r) {
    const double t = timing.frame_time(r + timing.drop_first);
    const double u = t - onset;
    const double imp = u > 0.0 ? hrf.integral(u - 0.1, u) : 0.0;
    CHECK(impulse(r, 0) == doctest::Approx(imp).epsilon(1e-12).scale(1e-14));
    // Stimulus s in [onset, onset + 5] contributes hrf(t - s).
    const double lo = std::max(0.0, u - 5.0), hi = std::max(0.0, u);
    const double ref = hi > lo ? gk.integrate([&](double v) { return hrf(v); }, lo, hi, 15, 1e-13) : 0.0;
    CHECK(std::abs(block(r, 0) - ref) <= 1e-12);
  }
}

TEST_CASE("design linearity and shift equivariance") {
  const GloverHrf hrf;
  const FrameTiming timing;
  const auto base = build_design({Event{1, 50.0, 5.0, 1.0}}, hrf, timing);
  const auto twice = build_design({Event{1, 50.0, 5.0, 2.0}}, hrf, timing);
  CHECK((twice - 2.0 * base).cwiseAbs().maxCoeff() <= 1e-13);
  const auto split = build_design({Event{1, 50.0, 2.5, 1.0}, Event{1, 52.5, 2.5, 1.0}}, hrf, timing);
  CHECK((split - base).cwiseAbs().maxCoeff() <= 1e-12);
  const auto shifted = build_design({Event{1, 55.0, 5.0, 1.0}}, hrf, timing);
  for (int r = 0; r + 1 < timing.effective(); ++r) {
    CHECK(shifted(r + 1, 0) == doctest::Approx(base(r, 0)).epsilon(1e-12).scale(1e-14));
  }
  const auto X = build_design(default_events(), hrf, timing);
  CHECK(X.cols() == 2);
  CHECK(X.rows() == 64);
  CHECK(X.col(1).maxCoeff() > X.col(0).maxCoeff());
}

TEST_CASE("event and volume readers") {
  std::istringstream ok("1,20,5,0.5\n2,60,5,1\n");
  const auto ev = read_events_csv(ok);
  REQUIRE(ev.size() == 2);
  CHECK(ev[1].type == 2);
  CHECK(ev[1].onset == 60.0);
  std::istringstream short_row("1,20,5\n"), zero("1,20,0,1\n"), text("1,twenty,5,1\n");
  CHECK_THROWS_AS(read_events_csv(short_row), ConfigError);
  CHECK_THROWS_AS(read_events_csv(zero), ConfigError);
  CHECK_THROWS_AS(read_events_csv(text), ConfigError);

  std::istringstream vol("frame,node,value\n0,0,1\n0,1,2\n1,0,3\n1,1,4\n");
  const auto v = read_volume_csv(vol, 2);
  REQUIRE(v.size() == 1);
  CHECK(v.at(0)(1, 0) == 3.0);
  std::istringstream multi("3,0,0,1\n3,0,1,2\n5,0,0,1\n5,0,1,2\n");
  CHECK(read_volume_csv(multi, 2).count(5) == 1);
  std::istringstream missing("0,0,1\n0,1,2\n1,0,3\n"), range("0,2,1\n"), empty("frame,node,value\n"),
      width("0,0\n");
  CHECK_THROWS_AS(read_volume_csv(missing, 2), ConfigError);
  CHECK_THROWS_AS(read_volume_csv(range, 2), ConfigError);
  CHECK_THROWS_AS(read_volume_csv(empty, 2), ConfigError);
  CHECK_THROWS_AS(read_volume_csv(width, 2), ConfigError);
}

TEST_CASE("slice fit recovers the block effects") {
  const auto basis = testing::slice_basis();
  const auto X = testing::slice_design();
  const int tr = static_cast<int>(basis.size());
  const auto lambdas = testing::slice_lambdas(tr, static_cast<int>(X.rows()));
  const ErrorSampler noise(lambdas);
  const auto beta = testing::slice_beta(tr, false);
  double oracle = 0.0, plugin = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto values = testing::slice_values(basis, X, beta, noise, s);
    const auto report = fit_slice(X, values, basis);
    CHECK(report.fit.provenance == LambdaKind::Empirical);
    CHECK(report.tests.size() == 8);
    CHECK((report.rotation.transpose() * report.rotation - Eigen::MatrixXd::Identity(tr, tr))
              .cwiseAbs().maxCoeff() <= 1e-10);
    const GlsSolver known(X, lambdas);
    oracle += (known.beta(basis.project_rows(values)) - beta).squaredNorm();
    plugin += (report.fit.beta_coefficients - beta).squaredNorm();
    for (const auto& t : report.tests) {
      CHECK(t.p_value >= 0.0);
      CHECK(t.p_value <= 1.0);
    }
  }
  CHECK(plugin <= 2.0 * oracle);
}

TEST_CASE("rotation does not change a nearly noiseless fit") {
  const auto basis = testing::slice_basis();
  const auto X = testing::slice_design();
  const int tr = static_cast<int>(basis.size());
  Eigen::VectorXd r0 = Eigen::VectorXd::Constant(tr, 1e-12);
  const ErrorSampler noise(lambda_tridiagonal(r0, Eigen::VectorXd::Zero(tr), static_cast<int>(X.rows())));
  const auto beta = testing::slice_beta(tr, false);
  const auto values = testing::slice_values(basis, X, beta, noise, 1);
  SliceFitOptions plain;
  plain.empirical_eigenbasis = false;
  const auto a = fit_slice(X, values, basis);
  const auto b = fit_slice(X, values, basis, plain);
  CHECK((a.fit.beta_coefficients - beta).cwiseAbs().maxCoeff() <= 1e-4);
  CHECK((b.fit.beta_coefficients - beta).cwiseAbs().maxCoeff() <= 1e-4);
  CHECK((a.pilot.beta_coefficients - beta).cwiseAbs().maxCoeff() <= 1e-4);
  CHECK_THROWS_AS(fit_slice(X.topRows(10), values, basis), DomainError);
}
