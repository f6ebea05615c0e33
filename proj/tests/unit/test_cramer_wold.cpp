#include <doctest.h>

#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include <Eigen/LU>

#include "hfanova/covariance_model.hpp"
#include "hfanova/cramer_wold.hpp"
#include "hfanova/error.hpp"
#include "hfanova/gaussian_simulation.hpp"
#include "hfanova/rng.hpp"
#include "hfanova/special_functions.hpp"
#include "ks.hpp"

using namespace hfanova;

namespace {

LambdaSequence ar_lambdas(int n, int tr) {
  Eigen::VectorXd r0(tr), r1(tr);
  for (int k = 0; k < tr; ++k) {
    r0[k] = 2.0 / (k + 1);
    r1[k] = 0.4 * r0[k];
  }
  return lambda_tridiagonal(r0, r1, n);
}

}  // namespace

TEST_CASE("chi-square tail against boost") {
  for (int df : {1, 2, 3, 5, 10, 30}) {
    for (double x : {0.0, 0.01, 0.5, 1.0, 2.5, 7.8, 20.0, 60.0, 150.0}) {
      const double ref = boost::math::gamma_q(0.5 * df, 0.5 * x);
      CHECK(chi2_sf(x, df) == doctest::Approx(ref).epsilon(1e-10).scale(1e-300));
      CHECK(chi2_sf(x, df) + chi2_cdf(x, df) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(chi2_sf(7.814727903251178, 3) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(regularized_gamma_p(1.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(regularized_gamma_q(3.0, 0.0) == 1.0);
  CHECK_THROWS_AS(chi2_sf(1.0, 0), DomainError);
}

TEST_CASE("default contrast") {
  const auto c = ContrastSpec::equal_components(4);
  Eigen::MatrixXd K(3, 4);
  K << 1, -1, 0, 0, 1, 0, -1, 0, 1, 0, 0, -1;
  CHECK(c.K == K);
  CHECK(c.C.isZero(0.0));
  CHECK_THROWS_AS(ContrastSpec::equal_components(1), DomainError);
}

TEST_CASE("Lambda_h") {
  LambdaSequence l;
  l.matrices = {Eigen::MatrixXd::Identity(2, 2), 2.0 * Eigen::MatrixXd::Ones(2, 2)};
  const Eigen::MatrixXd m = lambda_h(Eigen::Vector2d(1.0, 0.5), l);
  CHECK(m(0, 0) == doctest::Approx(1.5));
  CHECK(m(0, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(lambda_h(Eigen::Vector2d::Zero(), l), DomainError);
  CHECK_THROWS_AS(lambda_h(Eigen::Vector3d::Ones(), l), DomainError);

  // A combination of tridiagonal matrices stays tridiagonal.
  const auto ar = ar_lambdas(8, 3);
  const Eigen::MatrixXd t = lambda_h(Eigen::Vector3d(0.3, -1.0, 2.0), ar);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (std::abs(i - j) > 1) CHECK(t(i, j) == 0.0);
  CHECK(t(0, 0) == doctest::Approx(0.09 * 2.0 + 1.0 + 4.0 * 2.0 / 3));
}

TEST_CASE("noiseless null gives T = 0") {
  const int n = 40, tr = 3;
  const auto X = make_design(n, 4, 1);
  const Eigen::MatrixXd beta = Eigen::MatrixXd::Ones(4, tr);
  const Eigen::MatrixXd y = X * beta;
  const auto r = t_statistic(X, y, Eigen::Vector3d(1, 2, 3), ar_lambdas(n, tr),
                             ContrastSpec::equal_components(4));
  CHECK(r.t_value <= 1e-20);
  CHECK(r.p_value == doctest::Approx(1.0));
  CHECK(r.degrees_of_freedom == 3);
  CHECK_FALSE(r.reject);
}

TEST_CASE("T follows chi-square under the null") {
  const int n = 60, tr = 4, p = 4, draws = 500;
  const auto X = make_design(n, p, 2);
  const auto lambdas = ar_lambdas(n, tr);
  const ErrorSampler noise(lambdas);
  const Eigen::VectorXd h = Eigen::Vector4d(1.0, -0.5, 0.25, 2.0);
  const ProjectedTest test(X, h, lambdas, ContrastSpec::equal_components(p));
  Eigen::MatrixXd beta(p, tr);
  for (int s = 0; s < p; ++s) beta.row(s) = Eigen::RowVector4d(1.0, 0.5, -2.0, 0.1);
  std::vector<double> t;
  int rejections = 0;
  for (int r = 0; r < draws; ++r) {
    const auto rep = test.run(X * beta + noise.draw(substream_seed(3, {std::uint64_t(r)})), 0.05);
    t.push_back(rep.t_value);
    rejections += rep.reject;
  }
  const double d = testing::ks_distance(t, [](double x) { return chi2_cdf(x, 3); });
  CHECK(testing::kolmogorov_pvalue(d, t.size()) >= 0.01);
  CHECK(rejections / double(draws) == doctest::Approx(0.05).epsilon(0.8));
}

TEST_CASE("statistic scaling") {
  const int n = 50, tr = 3, p = 3;
  const auto X = make_design(n, p, 4);
  const auto lambdas = ar_lambdas(n, tr);
  Rng rng(5);
  const Eigen::MatrixXd y = X * rng.normal_matrix(p, tr) + ErrorSampler(lambdas).draw(6);
  const Eigen::Vector3d h(0.7, -0.2, 1.1);
  const auto c = ContrastSpec::equal_components(p);
  // Rescaling the direction changes nothing with the GLS form.
  CHECK(t_statistic(X, y, 3.0 * h, lambdas, c).t_value ==
        doctest::Approx(t_statistic(X, y, h, lambdas, c).t_value).epsilon(1e-10));
  // Noiseless T is quadratic in the effect size.
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(p, tr);
  delta.row(1).setConstant(0.3);
  const double t1 = t_statistic(X, X * delta, h, lambdas, c).t_value;
  const double t2 = t_statistic(X, X * (2.0 * delta), h, lambdas, c).t_value;
  CHECK(t1 > 0.0);
  CHECK(t2 == doctest::Approx(4.0 * t1).epsilon(1e-10));
}

TEST_CASE("Q forms coincide only when Lambda_h is the identity") {
  const int n = 30, p = 3;
  const auto X = make_design(n, p, 7);
  LambdaSequence eye;
  eye.matrices = {Eigen::MatrixXd::Identity(n, n)};
  const Eigen::VectorXd h = Eigen::VectorXd::Ones(1);
  const auto c = ContrastSpec::equal_components(p);
  const ProjectedTest gls(X, h, eye, c, QForm::Gls), printed(X, h, eye, c, QForm::Printed);
  CHECK((gls.q() - printed.q()).cwiseAbs().maxCoeff() <= 1e-12);

  const auto ar = ar_lambdas(n, 1);
  const ProjectedTest gls2(X, h, ar, c, QForm::Gls), printed2(X, h, ar, c, QForm::Printed);
  CHECK((gls2.q() - printed2.q()).cwiseAbs().maxCoeff() > 1e-3);
  const Eigen::MatrixXd L = lambda_h(h, ar);
  CHECK((gls2.q() - (X.transpose() * L.inverse() * X).inverse()).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((printed2.q() - (X.transpose() * L * X).inverse()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("shape errors") {
  const auto X = make_design(10, 3, 1);
  const auto l = ar_lambdas(10, 2);
  CHECK_THROWS_AS(ProjectedTest(X, Eigen::Vector2d(1, 1), l, ContrastSpec::equal_components(4)), DomainError);
  const ProjectedTest t(X, Eigen::Vector2d(1, 1), l, ContrastSpec::equal_components(3));
  CHECK_THROWS_AS(t.run(Eigen::MatrixXd::Zero(10, 3), 0.05), DomainError);
}
