#include "hfanova/domain.hpp"

#include <cmath>
#include <numbers>

#include "hfanova/error.hpp"

namespace hfanova {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::size_t cell_count(double extent, double step, const char* axis) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw DomainError(std::string("grid step along ") + axis + " must be positive");
  }
  const double cells = std::round(extent / step);
  if (cells < 1.0) return 1;
  if (cells > 1e6) throw DomainError(std::string("grid along ") + axis + " is too fine");
  return static_cast<std::size_t>(cells);
}

QuadratureGrid polar_grid(double radius, double angle, GridSteps steps) {
  QuadratureGrid g;
  g.count1 = cell_count(radius, steps.first, "r");
  g.count2 = cell_count(angle, steps.second, "phi");
  g.step1 = radius / static_cast<double>(g.count1);
  g.step2 = angle / static_cast<double>(g.count2);
  const auto total = static_cast<Eigen::Index>(g.count1 * g.count2);
  g.x.resize(total);
  g.y.resize(total);
  g.r.resize(total);
  g.phi.resize(total);
  g.weight.resize(total);
  Eigen::Index node = 0;
  for (std::size_t j = 0; j < g.count1; ++j) {
    const double r = (static_cast<double>(j) + 0.5) * g.step1;
    for (std::size_t m = 0; m < g.count2; ++m, ++node) {
      const double phi = (static_cast<double>(m) + 0.5) * g.step2;
      g.r[node] = r;
      g.phi[node] = phi;
      g.x[node] = r * std::cos(phi);
      g.y[node] = r * std::sin(phi);
      g.weight[node] = r * g.step1 * g.step2;
    }
  }
  return g;
}

}  // namespace

double CircularSector::angle() const { return std::numbers::pi * theta; }

void validate(const Domain& domain) {
  std::visit(Overloaded{
                 [](const Rectangle& r) {
                   if (!(r.length1() > 0.0) || !(r.length2() > 0.0)) {
                     throw DomainError("rectangle needs b1 > a1 and b2 > a2");
                   }
                 },
                 [](const Disk& d) {
                   if (!(d.radius > 0.0)) throw DomainError("disk radius must be positive");
                 },
                 [](const CircularSector& s) {
                   if (!(s.radius > 0.0)) throw DomainError("sector radius must be positive");
                   if (!(s.theta > 0.0 && s.theta < 2.0)) {
                     throw DomainError("sector angle fraction theta must lie in (0, 2)");
                   }
                 },
             },
             domain);
}

double area(const Domain& domain) {
  return std::visit(
      Overloaded{
          [](const Rectangle& r) { return r.length1() * r.length2(); },
          [](const Disk& d) { return std::numbers::pi * d.radius * d.radius; },
          [](const CircularSector& s) { return 0.5 * s.angle() * s.radius * s.radius; },
      },
      domain);
}

std::string domain_name(const Domain& domain) {
  return std::visit(Overloaded{
                        [](const Rectangle&) { return std::string("rectangle"); },
                        [](const Disk&) { return std::string("disk"); },
                        [](const CircularSector&) { return std::string("sector"); },
                    },
                    domain);
}

bool is_circular(const Domain& domain) { return !std::holds_alternative<Rectangle>(domain); }

QuadratureGrid make_grid(const Domain& domain, GridSteps steps) {
  validate(domain);
  return std::visit(
      Overloaded{
          [&](const Rectangle& rect) {
            QuadratureGrid g;
            g.count1 = cell_count(rect.length1(), steps.first, "x");
            g.count2 = cell_count(rect.length2(), steps.second, "y");
            g.step1 = rect.length1() / static_cast<double>(g.count1);
            g.step2 = rect.length2() / static_cast<double>(g.count2);
            const auto total = static_cast<Eigen::Index>(g.count1 * g.count2);
            g.x.resize(total);
            g.y.resize(total);
            g.weight = Eigen::VectorXd::Constant(total, g.step1 * g.step2);
            Eigen::Index node = 0;
            for (std::size_t j = 0; j < g.count2; ++j) {
              const double y = rect.a2 + (static_cast<double>(j) + 0.5) * g.step2;
              for (std::size_t i = 0; i < g.count1; ++i, ++node) {
                g.x[node] = rect.a1 + (static_cast<double>(i) + 0.5) * g.step1;
                g.y[node] = y;
              }
            }
            return g;
          },
          [&](const Disk& d) { return polar_grid(d.radius, 2.0 * std::numbers::pi, steps); },
          [&](const CircularSector& s) { return polar_grid(s.radius, s.angle(), steps); },
      },
      domain);
}

}  // namespace hfanova
