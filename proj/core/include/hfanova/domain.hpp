#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include <Eigen/Core>

namespace hfanova {

struct Rectangle {
  double a1 = 0.0;
  double b1 = 1.0;
  double a2 = 0.0;
  double b2 = 1.0;

  double length1() const { return b1 - a1; }
  double length2() const { return b2 - a2; }
};

struct Disk {
  double radius = 1.0;
};

/// Sector {0 < r < R, 0 < phi < pi * theta}.
struct CircularSector {
  double radius = 1.0;
  double theta = 1.0;

  double angle() const;
};

using Domain = std::variant<Rectangle, Disk, CircularSector>;

/// Throws DomainError when the geometry is degenerate.
void validate(const Domain& domain);
double area(const Domain& domain);
std::string domain_name(const Domain& domain);
bool is_circular(const Domain& domain);

/// Step sizes: (h_x, h_y) for rectangles, (h_R, h_phi) for circular domains.
struct GridSteps {
  double first = 0.05;
  double second = 0.05;
};

/// Midpoint quadrature grid strictly inside the domain. Rectangle nodes are
/// ordered with x varying fastest; polar nodes with phi varying fastest.
struct QuadratureGrid {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd r;    // polar radius (empty for rectangles)
  Eigen::VectorXd phi;  // polar angle (empty for rectangles)
  Eigen::VectorXd weight;
  std::size_t count1 = 0;  // nodes along x (or r)
  std::size_t count2 = 0;  // nodes along y (or phi)
  double step1 = 0.0;
  double step2 = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(weight.size()); }
  double total_weight() const { return weight.sum(); }
};

/// Builds the grid. The number of cells along each axis is the extent divided
/// by the requested step, rounded to the nearest integer; the realised step is
/// then adjusted so the cells tile the domain exactly.
QuadratureGrid make_grid(const Domain& domain, GridSteps steps);

}  // namespace hfanova
