#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace stretchnet::rng {

// One block of the Philox-4x32 keyed counter hash (10 rounds): maps a
// 128-bit counter and a 64-bit key to four statistically independent
// 32-bit words.  Pure function of its inputs, so any draw in a stream can
// be reproduced in isolation.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// A deterministic random stream addressed by (seed, sequence, tag).
// Successive draws hash an incrementing 64-bit block index, so two streams
// with distinct (seed, sequence, tag) triples are independent and a stream
// yields the same values no matter which thread consumes it.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint32_t sequence, std::uint32_t tag);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1); never returns 0 or 1 exactly.
  // Each draw consumes one aligned pair of 32-bit words, so a sequence of
  // these calls matches fill_uniform01 element for element.
  double uniform01();

  // Writes `count` uniform01 draws; equivalent to calling uniform01 in a
  // loop.
  void fill_uniform01(double* out, std::size_t count);

  // Uniform on [lo, hi).
  double uniform(double lo, double hi);

  // Exponential with the given mean; strictly positive.
  double exponential(double mean = 1.0);

  // Poisson(mean) via inversion for small means and transformed rejection
  // (PTRS) for large ones.  Requires mean >= 0.
  std::int64_t poisson(double mean);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int cursor_ = 4;
};

}  // namespace stretchnet::rng
