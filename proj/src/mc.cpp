#include "capgeo/mc.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "capgeo/rng.hpp"
#include "capgeo/sphere.hpp"

namespace capgeo::mc {

namespace {

std::uint64_t run_block(int dim, std::uint64_t seed, std::uint64_t block,
                        std::size_t count, const BlockKernel& kernel,
                        std::vector<std::uint8_t>* mask_out) {
  Eigen::MatrixXd dirs(dim, static_cast<Eigen::Index>(count));
  auto gen = rng::block_engine(seed, block);
  rng::fill_uniform_directions(dirs, gen);
  std::vector<std::uint8_t> hit(count, 0);
  kernel(dirs, hit);
  std::uint64_t hits = 0;
  for (std::size_t j = 0; j < count; ++j) hits += hit[j];
  if (mask_out) {
    std::size_t base = block * rng::kBlockSize;
    for (std::size_t j = 0; j < count; ++j) (*mask_out)[base + j] = hit[j];
  }
  return hits;
}

}  // namespace

McEstimate sphere_mc(int dim, std::uint64_t samples, std::uint64_t seed,
                     const BlockKernel& kernel, int workers) {
  if (dim < 2) throw std::invalid_argument("sphere_mc: dim must be >= 2");
  if (samples == 0) throw std::invalid_argument("sphere_mc: samples must be >= 1");
  const std::uint64_t nblocks = (samples + rng::kBlockSize - 1) / rng::kBlockSize;
  std::vector<std::uint64_t> block_hits(nblocks, 0);

  auto work = [&](std::uint64_t b) {
    std::size_t count = static_cast<std::size_t>(
        std::min<std::uint64_t>(rng::kBlockSize, samples - b * rng::kBlockSize));
    block_hits[b] = run_block(dim, seed, b, count, kernel, nullptr);
  };

  if (workers <= 1 || nblocks == 1) {
    for (std::uint64_t b = 0; b < nblocks; ++b) work(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    auto drain = [&] {
      for (std::uint64_t b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1)) work(b);
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(workers, static_cast<int>(nblocks));
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(drain);
    for (auto& t : pool) t.join();
  }

  std::uint64_t hits = 0;
  for (std::uint64_t b = 0; b < nblocks; ++b) hits += block_hits[b];

  const double total = sphere::sphere_measure(dim);
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  McEstimate est;
  est.value = total * p;
  est.stderr_ = total * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  est.hits = hits;
  est.samples = samples;
  est.seed = seed;
  return est;
}

std::vector<std::uint8_t> sphere_mc_mask(int dim, std::uint64_t samples,
                                         std::uint64_t seed, const BlockKernel& kernel) {
  if (dim < 2) throw std::invalid_argument("sphere_mc_mask: dim must be >= 2");
  const std::uint64_t nblocks = (samples + rng::kBlockSize - 1) / rng::kBlockSize;
  std::vector<std::uint8_t> mask(samples, 0);
  for (std::uint64_t b = 0; b < nblocks; ++b) {
    std::size_t count = static_cast<std::size_t>(
        std::min<std::uint64_t>(rng::kBlockSize, samples - b * rng::kBlockSize));
    run_block(dim, seed, b, count, kernel, &mask);
  }
  return mask;
}

}  // namespace capgeo::mc
