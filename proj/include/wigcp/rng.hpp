#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace wigcp {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure: the output
/// depends only on (counter, key).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Independent seed for sub-experiment `tag` (e.g. one per (A, B) pair),
/// drawn from a counter block that RngStream never uses.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

/// Counter-based random stream.
///
/// The key is the 64-bit seed and the upper half of the counter is the
/// stream id, so draws from (seed, stream_id) are reproducible bit-for-bit
/// no matter which thread consumes them or in which order streams run.
/// Satisfies UniformRandomBitGenerator.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double normal() { return normal_(*this); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace wigcp
