#include "hfanova/rng.hpp"

#include <boost/random/normal_distribution.hpp>

namespace hfanova {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(seed);
  for (const auto p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

// boost's ziggurat normal gives the same stream on every standard library,
// unlike std::normal_distribution.
double Rng::normal() {
  boost::random::normal_distribution<double> dist;
  return dist(engine_);
}

Eigen::VectorXd Rng::normal_vector(Eigen::Index size) {
  boost::random::normal_distribution<double> dist;
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = dist(engine_);
  return v;
}

Eigen::MatrixXd Rng::normal_matrix(Eigen::Index rows, Eigen::Index cols) {
  boost::random::normal_distribution<double> dist;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(engine_);
  }
  return m;
}

}  // namespace hfanova
