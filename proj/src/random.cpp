#include "ffpage/random.hpp"

namespace ffpage {
namespace {

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kSplitGamma = 0xd1b54a32d192ed03ULL;

}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) noexcept : key_(mix64(seed + kGoldenGamma)) {}

RandomStream RandomStream::split(std::uint64_t index) const noexcept {
  return RandomStream(KeyTag{}, mix64(key_ ^ mix64((index + 1) * kSplitGamma)));
}

RandomStream::result_type RandomStream::operator()() noexcept {
  ++counter_;
  return mix64(key_ + kGoldenGamma * counter_);
}

}  // namespace ffpage
