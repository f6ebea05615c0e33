#include "hfanova/error.hpp"

#include <sstream>

namespace hfanova {
namespace {

std::string pd_message(std::size_t k, double smallest) {
  std::ostringstream os;
  os << "covariance matrix for frequency k=" << k
     << " is not positive definite (smallest eigenvalue " << smallest << ")";
  return os.str();
}

std::string singular_message(std::size_t k, double condition) {
  std::ostringstream os;
  os << "normal equations for frequency k=" << k << " are singular (condition estimate "
     << condition << ")";
  return os.str();
}

std::string root_message(const std::string& what, double lower, double upper) {
  std::ostringstream os;
  os.precision(17);
  os << what << " [last bracket " << lower << ", " << upper << "]";
  return os.str();
}

}  // namespace

NotPositiveDefinite::NotPositiveDefinite(std::size_t k, double smallest_eigenvalue)
    : NumericalError(pd_message(k, smallest_eigenvalue)), k_(k), smallest_(smallest_eigenvalue) {}

SingularSystem::SingularSystem(std::size_t k, double condition_estimate)
    : NumericalError(singular_message(k, condition_estimate)),
      k_(k),
      condition_(condition_estimate) {}

RootNotFound::RootNotFound(const std::string& what, double lower, double upper)
    : NumericalError(root_message(what, lower, upper)), lower_(lower), upper_(upper) {}

}  // namespace hfanova
