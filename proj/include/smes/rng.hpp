#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "smes/tensor.hpp"

namespace smes {

/// splitmix64 step (Steele, Lea, Flood 2014): the 64-bit finalizer with
/// increment 0x9e3779b97f4a7c15 and mix constants 0xbf58476d1ce4e5b9,
/// 0x94d049bb133111eb. Used for seeding and for deriving sub-stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic sub-stream derivation: the same (base, salt) pair yields
/// the same derived seed on every platform.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

/// Deterministic pseudo-random stream, fixed across platforms and runs.
///
/// Generator: xoshiro256++ (Blackman & Vigna 2019), state seeded by four
/// splitmix64 draws from the 64-bit seed. Uniform doubles take the top
/// 53 bits of an output word; normals use the Marsaglia polar method with
/// the spare deviate cached. A stream is single-owner: hand it off, never
/// share it.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double next_unit();

  /// Uniform in [lo, hi); requires lo < hi.
  double uniform(double lo, double hi);

  /// Normal with the given mean and standard deviation; requires std >= 0.
  double normal(double mean, double stddev);

  /// Uniform integer in [0, n), n > 0 (Lemire multiply-shift reduction).
  std::uint64_t next_below(std::uint64_t n);

  Tensor uniform_tensor(double lo, double hi, std::vector<std::size_t> shape);
  Tensor normal_tensor(double mean, double stddev, std::vector<std::size_t> shape);

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace smes
