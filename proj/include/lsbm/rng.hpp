#ifndef LSBM_RNG_HPP
#define LSBM_RNG_HPP

#include <cstdint>
#include <limits>

namespace lsbm {

namespace detail {

// Stafford variant 13 of the splitmix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kSplitGamma = 0xC2B2AE3D27D4EB4Full;

}  // namespace detail

/// Counter-based splittable random stream. Output i of a stream with key K is
/// mix64(K + (i+1)*gamma), so draws depend only on (key, counter), never on
/// scheduling. split(salt) derives an independent child stream; chains of
/// splits give per-trial, per-purpose streams that are reproducible no matter
/// how trials are distributed over threads.
class SplitRng {
 public:
  using result_type = std::uint64_t;

  explicit SplitRng(std::uint64_t seed) : key_(detail::mix64(seed + detail::kGoldenGamma)), counter_(0) {}

  /// Independent child stream identified by (this stream, salt).
  SplitRng split(std::uint64_t salt) const {
    SplitRng child(0);
    child.key_ = detail::mix64(key_ ^ detail::mix64(salt * detail::kSplitGamma + detail::kGoldenGamma));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t key() const { return key_; }

  result_type operator()() {
    counter_ += detail::kGoldenGamma;
    return detail::mix64(key_ + counter_);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by rejection, bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

/// Purpose tags used when deriving per-task streams from a trial stream.
enum class RngPurpose : std::uint64_t {
  Assignment = 1,
  Labels = 2,
  EigsStart = 3,
};

inline SplitRng split_for(const SplitRng& rng, RngPurpose purpose) {
  return rng.split(static_cast<std::uint64_t>(purpose));
}

}  // namespace lsbm

#endif  // LSBM_RNG_HPP
