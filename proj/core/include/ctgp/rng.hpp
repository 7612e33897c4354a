#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

namespace ctgp {

// SplitMix64 mixing step, used to derive well-separated substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic normal generator. std::normal_distribution and
// std::uniform_real_distribution are implementation-defined, so uniforms are
// built from raw mt19937_64 output and normals use the polar Box-Muller
// transform. Identical seeds give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Independent per-trajectory stream.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) + index));
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double gaussian();

  Eigen::VectorXd gaussian_vector(Eigen::Index n);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ctgp
