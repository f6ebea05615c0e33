#pragma once

#include <stdexcept>
#include <string>

namespace hfanova {

/// Invalid argument or precondition violation (bad shape, out-of-range parameter).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed: factorization, root finding, singular system.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration or file I/O problem. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPositiveDefinite : public NumericalError {
 public:
  NotPositiveDefinite(std::size_t k, double smallest_eigenvalue);

  std::size_t frequency() const noexcept { return k_; }
  double smallest_eigenvalue() const noexcept { return smallest_; }

 private:
  std::size_t k_;
  double smallest_;
};

class SingularSystem : public NumericalError {
 public:
  SingularSystem(std::size_t k, double condition_estimate);

  std::size_t frequency() const noexcept { return k_; }
  double condition_estimate() const noexcept { return condition_; }

 private:
  std::size_t k_;
  double condition_;
};

class RootNotFound : public NumericalError {
 public:
  RootNotFound(const std::string& what, double lower, double upper);

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double lower_;
  double upper_;
};

}  // namespace hfanova
