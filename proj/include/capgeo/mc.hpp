#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace capgeo::mc {

// Monte Carlo estimate of a spherical measure. stderr_ is the binomial
// standard error sqrt(p(1-p)/samples) scaled by the total sphere measure;
// downstream checks use 3*stderr_ acceptance bands.
struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Marks hit[j] = 1 iff column j of dirs is accepted.
using BlockKernel =
    std::function<void(const Eigen::MatrixXd& dirs, std::vector<std::uint8_t>& hit)>;

// Estimates total_measure * P(accept) for uniform directions on S^{dim-1}.
// Deterministic for fixed seed, independent of `workers`.
McEstimate sphere_mc(int dim, std::uint64_t samples, std::uint64_t seed,
                     const BlockKernel& kernel, int workers = 1);

// Acceptance mask of the exact sample stream used by sphere_mc (test hook for
// seed/scale invariance checks).
std::vector<std::uint8_t> sphere_mc_mask(int dim, std::uint64_t samples,
                                         std::uint64_t seed, const BlockKernel& kernel);

}  // namespace capgeo::mc
