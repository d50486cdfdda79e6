#include "stretchnet/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace stretchnet::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kKeyBump0 = 0x9E3779B9u;
constexpr std::uint32_t kKeyBump1 = 0xBB67AE85u;

inline void mix_round(std::array<std::uint32_t, 4>& c,
                      const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
  const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
  c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
       static_cast<std::uint32_t>(p1),
       static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
       static_cast<std::uint32_t>(p0)};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round != 0) {
      key[0] += kKeyBump0;
      key[1] += kKeyBump1;
    }
    mix_round(counter, key);
  }
  return counter;
}

CounterStream::CounterStream(std::uint64_t seed, std::uint32_t sequence,
                             std::uint32_t tag)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)},
      counter_{0u, 0u, tag, sequence} {}

void CounterStream::refill() {
  block_ = philox4x32(counter_, key_);
  cursor_ = 0;
  if (++counter_[0] == 0u) {
    ++counter_[1];
  }
}

std::uint32_t CounterStream::next_u32() {
  if (cursor_ == 4) {
    refill();
  }
  return block_[static_cast<std::size_t>(cursor_++)];
}

std::uint64_t CounterStream::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double CounterStream::uniform01() {
  // Take an aligned pair of words so bulk and scalar paths agree.
  if (cursor_ > 2) {
    refill();
  }
  const auto index = static_cast<std::size_t>(cursor_);
  const std::uint64_t bits =
      (std::uint64_t{block_[index + 1]} << 32) | block_[index];
  cursor_ += 2;
  // 52 random bits centered in each subinterval: range [2^-53, 1 - 2^-53].
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

void CounterStream::fill_uniform01(double* out, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    if (cursor_ > 2) {
      refill();
    }
    const auto index = static_cast<std::size_t>(cursor_);
    const std::uint64_t bits =
        (std::uint64_t{block_[index + 1]} << 32) | block_[index];
    cursor_ += 2;
    out[i] = (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
  }
}

double CounterStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double CounterStream::exponential(double mean) {
  return -mean * std::log(uniform01());
}

std::int64_t CounterStream::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("poisson: mean must be finite and >= 0");
  }
  if (mean < 10.0) {
    // Multiplicative inversion: count uniforms until their product drops
    // below e^(-mean).
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double product = uniform01();
    while (product > limit) {
      product *= uniform01();
      ++k;
    }
    return k;
  }
  // Transformed rejection with squeeze (PTRS), accurate for mean >= 10.
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    const double u = uniform01() - 0.5;
    const double v = uniform01();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) {
      return static_cast<std::int64_t>(k);
    }
    if (k < 0.0 || (us < 0.013 && v > us)) {
      continue;
    }
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * log_mean - mean - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(k);
    }
  }
}

}  // namespace stretchnet::rng
