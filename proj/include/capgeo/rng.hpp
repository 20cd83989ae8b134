#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace capgeo::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Sampling is split into fixed-size blocks; block b of stream `seed` always
// produces the same draws no matter which worker runs it, so estimates are
// bit-identical for any worker count.
inline constexpr std::size_t kBlockSize = 4096;

inline std::mt19937_64 block_engine(std::uint64_t seed, std::uint64_t block) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(block)));
}

// Columns are i.i.d. uniform directions on S^{dim-1} (normalized Gaussians).
inline void fill_uniform_directions(Eigen::MatrixXd& dirs, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index j = 0; j < dirs.cols(); ++j) {
    double norm2 = 0.0;
    do {
      for (Eigen::Index i = 0; i < dirs.rows(); ++i) dirs(i, j) = normal(gen);
      norm2 = dirs.col(j).squaredNorm();
    } while (norm2 < 1e-300);
    dirs.col(j) /= std::sqrt(norm2);
  }
}

}  // namespace capgeo::rng
