#include "hfanova/bessel.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hfanova/error.hpp"

namespace hfanova {
namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 200000;

void check_arguments(double order, double x) {
  if (!(order >= 0.0) || !(x >= 0.0)) {
    throw DomainError("bessel_j: order and argument must be non-negative (order=" +
                      std::to_string(order) + ", x=" + std::to_string(x) + ")");
  }
}

// Ascending series. Every term after the first shrinks when (x/2)^2 <= order+1,
// so the alternating sum loses no significant digits in that regime.
double series(double order, double x) {
  const double half = 0.5 * x;
  const double log_prefactor = order * std::log(half) - std::lgamma(order + 1.0);
  const double prefactor = std::exp(log_prefactor);
  if (prefactor == 0.0) return 0.0;
  const double q = -half * half;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 500; ++m) {
    term *= q / (static_cast<double>(m) * (order + m));
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum)) break;
  }
  return prefactor * sum;
}

// Steed's method: continued fraction CF1 for J'/J at the requested order,
// downward recurrence to an order mu in [-1/2, 1/2), and the complex continued
// fraction CF2 fixes the normalisation through the Wronskian. Valid for x >= 2.
double steed(double order, double x) {
  const int nl = std::max(0, static_cast<int>(order - x + 1.5));
  const double mu = order - nl;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  const double w = xi2 / std::numbers::pi;

  int sign = 1;
  double h = order * xi;
  if (h < kTiny) h = kTiny;
  double b = xi2 * order;
  double d = 0.0;
  double c = h;
  int i = 1;
  for (; i <= kMaxIterations; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b - 1.0 / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) sign = -sign;
    if (std::abs(del - 1.0) < kEps) break;
  }
  if (i > kMaxIterations) {
    throw NumericalError("bessel_j: continued fraction CF1 did not converge");
  }

  double rjl = sign * kTiny;
  double rjpl = h * rjl;
  double rjl1 = rjl;
  double rjp1 = rjpl;
  double fact = order * xi;
  for (int l = nl; l >= 1; --l) {
    const double next = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * next - rjl;
    rjl = next;
    if (std::abs(rjl) > 1e250) {
      rjl *= 1e-250;
      rjpl *= 1e-250;
      rjl1 *= 1e-250;
      rjp1 *= 1e-250;
    }
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  double a = 0.25 - mu * mu;
  double p = -0.5 * xi;
  double q = 1.0;
  const double br = 2.0 * x;
  double bi = 2.0;
  fact = a * xi / (p * p + q * q);
  double cr = br + q * fact;
  double ci = bi + p * fact;
  double den = br * br + bi * bi;
  double dr = br / den;
  double di = -bi / den;
  double dlr = cr * dr - ci * di;
  double dli = cr * di + ci * dr;
  double temp = p * dlr - q * dli;
  q = p * dli + q * dlr;
  p = temp;
  for (i = 2; i <= kMaxIterations; ++i) {
    a += 2 * (i - 1);
    bi += 2.0;
    dr = a * dr + br;
    di = a * di + bi;
    if (std::abs(dr) + std::abs(di) < kTiny) dr = kTiny;
    fact = a / (cr * cr + ci * ci);
    cr = br + cr * fact;
    ci = bi - ci * fact;
    if (std::abs(cr) + std::abs(ci) < kTiny) cr = kTiny;
    den = dr * dr + di * di;
    dr /= den;
    di /= -den;
    dlr = cr * dr - ci * di;
    dli = cr * di + ci * dr;
    temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    if (std::abs(dlr - 1.0) + std::abs(dli) < kEps) break;
  }
  if (i > kMaxIterations) {
    throw NumericalError("bessel_j: continued fraction CF2 did not converge");
  }

  const double gam = (p - f) / q;
  double rjmu = std::sqrt(w / ((p - f) * gam + q));
  rjmu = std::copysign(rjmu, rjl);
  return rjl1 * (rjmu / rjl);
}

// First zeros of Ai(-t), used by the large-order guess.
constexpr std::array<double, 5> kAiryZeros = {2.338107410459767, 4.087949444130971,
                                              5.520559828095551, 6.786708090071759,
                                              7.944133587120853};

double airy_zero(int h) {
  if (h <= static_cast<int>(kAiryZeros.size())) return kAiryZeros[h - 1];
  const double t = 3.0 * std::numbers::pi / 8.0 * (4.0 * h - 1.0);
  return std::pow(t, 2.0 / 3.0) * (1.0 + 5.0 / 48.0 / (t * t));
}

}  // namespace

double bessel_j(double order, double x) {
  check_arguments(order, x);
  if (x == 0.0) return order == 0.0 ? 1.0 : 0.0;
  if (x < 2.0 || 0.25 * x * x <= order + 1.0) return series(order, x);
  return steed(order, x);
}

double bessel_j_derivative(double order, double x) {
  check_arguments(order, x);
  if (x == 0.0) {
    if (order == 1.0) return 0.5;
    if (order > 0.0 && order < 1.0) return std::numeric_limits<double>::infinity();
    return 0.0;
  }
  return order / x * bessel_j(order, x) - bessel_j(order + 1.0, x);
}

double mcmahon_zero_guess(double order, int root_index) {
  return std::numbers::pi * (root_index + 0.5 * order - 0.25);
}

double olver_zero_guess(double order, int root_index) {
  const double delta = airy_zero(root_index) / std::cbrt(2.0);
  return order + delta * std::cbrt(order);
}

std::vector<double> bessel_j_zeros(double order, int count) {
  if (count < 1) throw DomainError("bessel_j_zeros: root index must be >= 1");
  if (!(order >= 0.0)) throw DomainError("bessel_j_zeros: order must be non-negative");

  // Consecutive zeros of J_order are more than 3 apart for every order >= 0,
  // so a 0.5 scan cannot step over one. j_{order,1} > sqrt(order (order + 2)).
  constexpr double kScan = 0.5;
  std::vector<double> zeros;
  zeros.reserve(static_cast<std::size_t>(count));
  double lower = std::max(0.25, std::sqrt(order * (order + 2.0)));
  double f_lower = bessel_j(order, lower);

  for (int h = 1; h <= count; ++h) {
    double upper = lower + kScan;
    double f_upper = bessel_j(order, upper);
    int steps = 0;
    while (f_lower * f_upper > 0.0) {
      lower = upper;
      f_lower = f_upper;
      upper += kScan;
      f_upper = bessel_j(order, upper);
      if (++steps > 100000) {
        throw RootNotFound("bessel_j_zero: no sign change found for order " +
                               std::to_string(order) + ", root " + std::to_string(h),
                           lower, upper);
      }
    }

    // Safeguarded Newton started from the asymptotic guess when it falls
    // inside the bracket, else from the midpoint.
    const double guess =
        order > h ? olver_zero_guess(order, h) : mcmahon_zero_guess(order, h);
    double lo = lower;
    double hi = upper;
    double f_lo = f_lower;
    double root = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      const double f = bessel_j(order, root);
      if (f == 0.0) {
        converged = true;
        break;
      }
      if ((f < 0.0) == (f_lo < 0.0)) {
        lo = root;
        f_lo = f;
      } else {
        hi = root;
      }
      const double df = bessel_j_derivative(order, root);
      double next = root - f / df;
      if (!(next > lo && next < hi) || df == 0.0) next = 0.5 * (lo + hi);
      const double step = std::abs(next - root);
      root = next;
      if (step <= 4.0 * std::numeric_limits<double>::epsilon() * root ||
          hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * root) {
        converged = true;
        break;
      }
    }
    if (!converged || std::abs(bessel_j(order, root)) > 1e-10) {
      throw RootNotFound("bessel_j_zero: refinement failed for order " +
                             std::to_string(order) + ", root " + std::to_string(h),
                         lo, hi);
    }
    zeros.push_back(root);
    lower = root + 1e-6 * std::max(1.0, root);
    f_lower = bessel_j(order, lower);
  }
  return zeros;
}

double bessel_j_zero(double order, int root_index) {
  return bessel_j_zeros(order, root_index).back();
}

}  // namespace hfanova
