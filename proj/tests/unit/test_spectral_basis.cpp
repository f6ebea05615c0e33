#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "hfanova/csv.hpp"
#include "hfanova/error.hpp"
#include "hfanova/spectral_basis.hpp"

using namespace hfanova;
using std::numbers::pi;

namespace {

const Rectangle kRect{-2.0, 3.0, -2.0, 3.0};

}  // namespace

TEST_CASE("grid cells tile each domain") {
  const auto rect = make_grid(kRect, {0.05, 0.05});
  CHECK(rect.count1 == 100);
  CHECK(rect.count2 == 100);
  CHECK(rect.total_weight() == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(rect.x[0] == doctest::Approx(-1.975));
  CHECK(rect.x[1] == doctest::Approx(-1.925));  // x varies fastest
  CHECK(rect.y[1] == doctest::Approx(-1.975));

  const auto disk = make_grid(Disk{25.0}, {25.0 / 145.0, 2 * pi / 135.0});
  CHECK(disk.count1 == 145);
  CHECK(disk.count2 == 135);
  CHECK(disk.total_weight() == doctest::Approx(pi * 625.0).epsilon(1e-12));
  CHECK(disk.phi[1] > disk.phi[0]);  // phi varies fastest
  CHECK(disk.r[1] == disk.r[0]);

  const auto sector = make_grid(CircularSector{12.0, 2.0 / 3.0}, {12.0 / 145.0, 2 * pi / 115.0});
  CHECK(sector.count2 == 38);  // (2 pi / 3) / (2 pi / 115) = 38.33 cells, rounded
  CHECK(sector.total_weight() == doctest::Approx(0.5 * 144.0 * 2 * pi / 3).epsilon(1e-12));
  for (Eigen::Index j = 0; j < sector.phi.size(); ++j) {
    CHECK(sector.phi[j] > 0.0);
    CHECK(sector.phi[j] < 2 * pi / 3);
  }
}

TEST_CASE("invalid geometry is rejected") {
  CHECK_THROWS_AS(make_grid(Rectangle{1.0, 0.0, 0.0, 1.0}, {0.1, 0.1}), DomainError);
  CHECK_THROWS_AS(make_grid(Disk{-1.0}, {0.1, 0.1}), DomainError);
  CHECK_THROWS_AS(make_grid(CircularSector{1.0, 2.5}, {0.1, 0.1}), DomainError);
  CHECK_THROWS_AS(make_grid(kRect, {0.0, 0.1}), DomainError);
}

TEST_CASE("rectangle eigenvalues and ordering") {
  const auto pairs = eigenpairs(kRect, RectangleTruncation{4, 4});
  REQUIRE(pairs.size() == 16);
  CHECK(pairs[0].eigenvalue == doctest::Approx(2 * pi * pi / 25.0).epsilon(1e-14));
  CHECK(pairs[0].eigenvalue == doctest::Approx(0.78957).epsilon(1e-5));
  CHECK(pairs[0].normalization == doctest::Approx(2.0 / 5.0));
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    CHECK(pairs[i].eigenvalue >= pairs[i - 1].eigenvalue);
  }
  // (1,2) and (2,1) tie on the square; the lexicographic order decides.
  const auto& a = std::get<RectangleIndex>(pairs[1].index);
  const auto& b = std::get<RectangleIndex>(pairs[2].index);
  CHECK(a.k1 == 1);
  CHECK(a.k2 == 2);
  CHECK(b.k1 == 2);
  CHECK(b.k2 == 1);
}

TEST_CASE("disk and sector eigenpairs") {
  const auto disk = eigenpairs(Disk{25.0}, CircularTruncation{7});
  REQUIRE(disk.size() == 7);
  CHECK(disk[0].eigenvalue == doctest::Approx(std::pow(2.404826 / 25.0, 2)).epsilon(1e-6));
  CHECK(disk[0].eigenvalue == doctest::Approx(9.2531e-3).epsilon(1e-4));
  for (const auto& p : disk) CHECK(std::get<DiskIndex>(p.index).order == 0);

  const auto sector = eigenpairs(CircularSector{12.0, 2.0 / 3.0}, CircularTruncation{3});
  CHECK(sector[0].bessel_order == doctest::Approx(1.5));
  CHECK(std::get<SectorIndex>(sector[0].index).k == 1);
  // Angular factor sin(3 phi / 2).
  const double r = 5.0, phi = 0.4;
  const double expected = sector[0].normalization *
                          boost::math::cyl_bessel_j(1.5, sector[0].bessel_zero * r / 12.0) *
                          std::sin(1.5 * phi);
  CHECK(eigenfunction(CircularSector{12.0, 2.0 / 3.0}, sector[0], r, phi) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("analytic normalisation integrates to one") {
  boost::math::quadrature::gauss_kronrod<double, 61> gk;
  const Disk disk{3.0};
  for (const auto& p : eigenpairs(disk, GlobalTruncation{12})) {
    const auto& idx = std::get<DiskIndex>(p.index);
    const double radial = gk.integrate(
        [&](double r) {
          const double j = boost::math::cyl_bessel_j(p.bessel_order, p.bessel_zero * r / 3.0);
          return j * j * r;
        },
        0.0, 3.0, 15, 1e-14);
    const double angular = idx.order == 0 ? 2 * pi : pi;
    CHECK(p.normalization * p.normalization * radial * angular == doctest::Approx(1.0).epsilon(1e-10));
  }
  const CircularSector sector{2.0, 2.0 / 3.0};
  for (const auto& p : eigenpairs(sector, GlobalTruncation{10})) {
    const double radial = gk.integrate(
        [&](double r) {
          const double j = boost::math::cyl_bessel_j(p.bessel_order, p.bessel_zero * r / 2.0);
          return j * j * r;
        },
        0.0, 2.0, 15, 1e-14);
    CHECK(p.normalization * p.normalization * radial * (pi / 3.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("Gram deviation at scenario resolutions") {
  CHECK(build_basis(kRect, {0.05, 0.05}, RectangleTruncation{12, 12}).gram_deviation() <= 0.05);
  CHECK(build_basis(Disk{25.0}, {25.0 / 145, 2 * pi / 135}, CircularTruncation{7}).gram_deviation() <= 0.05);
  CHECK(build_basis(CircularSector{25.0, 2.0 / 3.0}, {25.0 / 145, 2 * pi / 115}, CircularTruncation{7})
            .gram_deviation() <= 0.05);
  CHECK(build_basis(Disk{25.0}, {25.0 / 145, 2 * pi / 135}, GlobalTruncation{30}).gram_deviation() <= 0.05);
}

TEST_CASE("Gram deviation shrinks as steps halve") {
  // Midpoint sums of sines are exactly orthogonal once every axis has more
  // cells than the highest index; below that the modes alias.
  const Rectangle rect{0.0, 1.0, 0.0, 1.3};
  CHECK(build_basis(rect, {0.2, 0.2}, RectangleTruncation{6, 6}).gram_deviation() > 0.1);
  for (double h : {0.1, 0.05, 0.025}) {
    CHECK(build_basis(rect, {h, h}, RectangleTruncation{6, 6}).gram_deviation() <= 1e-13);
  }
  double previous_disk = 1e9;
  for (int m : {20, 40, 80, 160}) {
    const double dev =
        build_basis(Disk{1.0}, {1.0 / m, 2 * pi / m}, CircularTruncation{5}).gram_deviation();
    CHECK(dev < previous_disk);
    previous_disk = dev;
  }
}

TEST_CASE("boundary vanishing on the rectangle") {
  const auto basis = build_basis(kRect, {0.05, 0.05}, RectangleTruncation{4, 4});
  const auto& g = basis.grid();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const auto& idx = std::get<RectangleIndex>(basis.pairs()[k].index);
    // |phi| <= norm * pi * max(k) / l * distance to the boundary.
    const double lipschitz = 0.4 * pi * std::max(idx.k1, idx.k2) / 5.0;
    for (Eigen::Index j = 0; j < g.x.size(); ++j) {
      const double d = std::min({g.x[j] + 2.0, 3.0 - g.x[j], g.y[j] + 2.0, 3.0 - g.y[j]});
      if (d <= 0.05) CHECK(std::abs(basis.values()(k, j)) <= lipschitz * 0.05);
    }
  }
}

TEST_CASE("Weyl slope on the rectangle") {
  const auto pairs = eigenpairs(kRect, GlobalTruncation{500});
  double sk = 0, sl = 0, skk = 0, skl = 0, m = 0;
  for (int k = 50; k <= 500; ++k) {
    const double l = pairs[k - 1].eigenvalue;
    sk += k;
    sl += l;
    skk += double(k) * k;
    skl += k * l;
    m += 1;
  }
  const double slope = (m * skl - sk * sl) / (m * skk - sk * sk);
  CHECK(slope == doctest::Approx(4 * pi / 25.0).epsilon(0.10));
}

TEST_CASE("global truncation is the sorted union") {
  const auto global = eigenpairs(kRect, GlobalTruncation{20});
  const auto block = eigenpairs(kRect, RectangleTruncation{20, 20});
  for (std::size_t i = 0; i < global.size(); ++i) {
    CHECK(global[i].eigenvalue == doctest::Approx(block[i].eigenvalue).epsilon(1e-14));
  }
  const auto disk = eigenpairs(Disk{1.0}, GlobalTruncation{6});
  CHECK(disk[0].eigenvalue == doctest::Approx(std::pow(2.404825557695773, 2)));
  CHECK(std::get<DiskIndex>(disk[1].index).order == 1);
  CHECK(std::get<DiskIndex>(disk[1].index).parity == Parity::Cos);
  CHECK(std::get<DiskIndex>(disk[2].index).parity == Parity::Sin);
}

TEST_CASE("the pair cap is enforced") {
  CHECK_THROWS_AS(eigenpairs(kRect, RectangleTruncation{200, 200}), DomainError);
  BasisOptions small;
  small.max_pairs = 10;
  CHECK_THROWS_AS(eigenpairs(kRect, RectangleTruncation{4, 4}, small), DomainError);
}

TEST_CASE("projection and reconstruction") {
  const auto basis = build_basis(kRect, {0.05, 0.05}, RectangleTruncation{4, 4});
  const Eigen::Index tr = static_cast<Eigen::Index>(basis.size());
  const Eigen::VectorXd e3 = basis.project(basis.values().row(2).transpose());
  CHECK((e3 - Eigen::VectorXd::Unit(tr, 2)).cwiseAbs().maxCoeff() <= 0.05);
  CHECK(basis.project(Eigen::VectorXd::Zero(basis.nodes())).isZero(0.0));
  const Eigen::VectorXd mix = 2 * basis.values().row(0).transpose() + 3 * basis.values().row(1).transpose();
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(tr);
  expected << 2, 3, Eigen::VectorXd::Zero(tr - 2);
  CHECK((basis.project(mix) - expected).cwiseAbs().maxCoeff() <= 0.05);

  Eigen::VectorXd c(tr);
  for (Eigen::Index k = 0; k < tr; ++k) c[k] = std::sin(1.7 * k) + 0.3;
  CHECK((basis.project(basis.reconstruct(c)) - c).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((basis.reconstruct(Eigen::VectorXd::Unit(tr, 0)) - basis.values().row(0).transpose())
            .isZero(0.0));
  const Eigen::VectorXd field = basis.values().row(5).transpose();
  CHECK((basis.reconstruct(basis.project(field)) - field).cwiseAbs().maxCoeff() <=
        0.05 * field.cwiseAbs().maxCoeff());

  CHECK_THROWS_AS(basis.project(Eigen::VectorXd::Zero(3)), DomainError);
  CHECK_THROWS_AS(basis.reconstruct(Eigen::VectorXd::Zero(3)), DomainError);
}

TEST_CASE("circular projection inverts reconstruction to quadrature accuracy") {
  const auto basis = build_basis(Disk{25.0}, {25.0 / 145, 2 * pi / 135}, CircularTruncation{7});
  Eigen::VectorXd c(7);
  c << 1, -2, 0.5, 3, 0, 1, -1;
  CHECK((basis.project(basis.reconstruct(c)) - c).cwiseAbs().maxCoeff() <= 0.05 * 3);
}

TEST_CASE("grid values equal pointwise eigenfunctions") {
  const auto basis = build_basis(CircularSector{4.0, 2.0 / 3.0}, {4.0 / 50, 2 * pi / 115},
                                 GlobalTruncation{8});
  const auto& g = basis.grid();
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (Eigen::Index j : {Eigen::Index(0), Eigen::Index(77), g.r.size() - 1}) {
      CHECK(basis.values()(k, j) ==
            doctest::Approx(eigenfunction(basis.domain(), basis.pairs()[k], g.r[j], g.phi[j]))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("basis export is deterministic and complete") {
  const auto basis = build_basis(kRect, {0.05, 0.05}, RectangleTruncation{4, 4});
  std::ostringstream a, b;
  write_basis_csv(a, basis);
  write_basis_csv(b, build_basis(kRect, {0.05, 0.05}, RectangleTruncation{4, 4}));
  CHECK(a.str() == b.str());
  std::istringstream is(a.str());
  const auto rows = read_csv(is);
  int numeric = 0;
  for (const auto& r : rows) numeric += is_numeric_record(r);
  CHECK(numeric == 16);
}
