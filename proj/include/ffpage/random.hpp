#pragma once

#include <cstdint>
#include <limits>

namespace ffpage {

/// Counter-based random stream (SplitMix64 output function over a keyed
/// counter). Output i of a stream depends only on its key and i, so streams
/// split per sample index give the same numbers under any thread schedule.
///
/// Satisfies UniformRandomBitGenerator and works with the <random>
/// distributions.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) noexcept;

  /// Independent child stream identified by `index`. Splitting is pure: the
  /// parent is not advanced, and equal indices give identical children.
  [[nodiscard]] RandomStream split(std::uint64_t index) const noexcept;

  result_type operator()() noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  [[nodiscard]] std::uint64_t key() const noexcept { return key_; }
  [[nodiscard]] std::uint64_t position() const noexcept { return counter_; }

 private:
  struct KeyTag {};
  RandomStream(KeyTag, std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
[[nodiscard]] std::uint64_t mix64(std::uint64_t x) noexcept;

/// Stream tags used to separate purposes drawn from the same experiment seed.
namespace stream_tag {
inline constexpr std::uint64_t kEnsemble = 0x454e53454d424c45ULL;
inline constexpr std::uint64_t kTimes = 0x54494d4553000000ULL;
inline constexpr std::uint64_t kPhases = 0x5048415345530000ULL;
}  // namespace stream_tag

}  // namespace ffpage
