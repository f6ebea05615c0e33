#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Core>

namespace hfanova {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for an independent substream addressed by (seed, path...).
std::uint64_t substream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Name recorded in outputs so artifacts identify their generator.
inline constexpr const char* kGeneratorName = "mt19937_64+splitmix64/ziggurat-normal";

/// mt19937_64 engine with a platform-independent normal transform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal();
  Eigen::VectorXd normal_vector(Eigen::Index size);
  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hfanova
