#include "smes/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace smes {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t state = base;
  std::uint64_t mixed = splitmix64(state) ^ (salt * 0xda942042e4dd58b5ull);
  return splitmix64(mixed);
}

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
  std::uint64_t sm = seed;
  for (auto& word : state_) word = splitmix64(sm);
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256++ step.
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("rng: uniform requires lo < hi");
  return lo + next_unit() * (hi - lo);
}

double RngStream::normal(double mean, double stddev) {
  if (stddev < 0.0) throw std::invalid_argument("rng: normal requires std >= 0");
  if (has_spare_) {
    has_spare_ = false;
    return mean + stddev * spare_;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * next_unit() - 1.0;
    v = 2.0 * next_unit() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return mean + stddev * (u * factor);
}

std::uint64_t RngStream::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("rng: next_below requires n > 0");
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

Tensor RngStream::uniform_tensor(double lo, double hi, std::vector<std::size_t> shape) {
  Tensor out(std::move(shape));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = uniform(lo, hi);
  return out;
}

Tensor RngStream::normal_tensor(double mean, double stddev, std::vector<std::size_t> shape) {
  Tensor out(std::move(shape));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = normal(mean, stddev);
  return out;
}

}  // namespace smes
