#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace conekit {

/// Deterministic, splittable random stream.
///
/// Algorithm (ports must reproduce it exactly):
///  - key   = fmix64(seed) ^ fmix64(stream + 0x9E3779B97F4A7C15), where fmix64
///            is the MurmurHash3 64-bit finalizer;
///  - state = four successive SplitMix64 outputs starting from `key`;
///  - words = xoshiro256** over that state;
///  - uniform doubles in (0, 1] are ((word >> 11) + 1) * 2^-53;
///  - normals use the Box-Muller transform on two uniforms u1, u2:
///            sqrt(-2 ln u1) * cos(2 pi u2), then sqrt(-2 ln u1) * sin(2 pi u2).
///
/// Child streams are addressed by `substream(i)`, whose stream index is
/// fmix64(stream ^ fmix64(i + 1)). The seed is inherited, so a whole
/// experiment is reproducible from a single (seed, stream) pair.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed = 0, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  RandomStream substream(std::uint64_t index) const;

  std::uint64_t next_u64();
  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform on (0, 1].
  double uniform();
  /// Uniform integer in [0, bound). `bound` must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);
  /// Standard normal.
  double gaussian();
  void fill_gaussian(std::span<double> out);

  static constexpr const char* algorithm_name() {
    return "xoshiro256** seeded by SplitMix64 over fmix64(seed)^fmix64(stream+phi); "
           "Box-Muller normals";
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t fmix64(std::uint64_t k) noexcept;

}  // namespace conekit
