#pragma once

// Counter-based random numbers. Every draw is a pure function of
// (seed, stream, position), so instances are reproducible from their
// manifest and independent streams can be consumed concurrently.

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace jtrace {

/// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as
/// 1, 2, 3"). The 64-bit seed is the key, the 64-bit stream index fills the
/// upper half of the 128-bit counter and the lower half counts blocks.
/// Satisfies UniformRandomBitGenerator.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;

  Philox4x32(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  void discard(unsigned long long n);

  /// One raw block: bijection of (counter, key). Exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key);

 private:
  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> buffer_{};
  unsigned index_ = 4;
};

/// Seeded generator handle with the distributions the instance factory needs.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream), engine_(seed, stream) {}

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream() const { return stream_; }

  /// Independent child generator; the child stream is a hash of
  /// (stream, index).
  [[nodiscard]] Rng split(std::uint64_t index) const;

  double normal();
  double uniform(double lo, double hi);
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  double gamma(double shape);

  Philox4x32& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  Philox4x32 engine_;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace jtrace
