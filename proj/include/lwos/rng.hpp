#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

#include <boost/random/normal_distribution.hpp>

namespace lwos {

// SplitMix64 finalizer. Used only to derive stream keys from seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based Philox4x64-10 generator (Salmon et al., SC'11).
///
/// The stream is fully determined by a 128-bit key; the 256-bit counter is
/// advanced once per block of four outputs. Output matches numpy's
/// `Philox` bit generator for the same key and counter.
class Philox4x64 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  Philox4x64() = default;
  explicit Philox4x64(Key key, Block counter = {0, 0, 0, 0}) noexcept
      : key_(key), counter_(counter) {}

  result_type operator()() noexcept {
    if (pos_ == 4) {
      increment();
      buffer_ = encrypt(counter_, key_);
      pos_ = 0;
    }
    return buffer_[pos_++];
  }

  void discard(std::uint64_t n) noexcept {
    for (; n > 0; --n) (*this)();
  }

  const Key& key() const noexcept { return key_; }

  /// Ten Philox rounds over one counter block.
  static Block encrypt(Block ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      const unsigned __int128 p0 = static_cast<unsigned __int128>(ctr[0]) * kMul0;
      const unsigned __int128 p1 = static_cast<unsigned __int128>(ctr[2]) * kMul1;
      const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
      const auto lo0 = static_cast<std::uint64_t>(p0);
      const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
      const auto lo1 = static_cast<std::uint64_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

  void increment() noexcept {
    for (auto& word : counter_) {
      if (++word != 0) break;
    }
  }

  Key key_{0, 0};
  Block counter_{0, 0, 0, 0};
  Block buffer_{};
  int pos_ = 4;
};

using Rng = Philox4x64;

/// Stream for replica `replica` of suite `suite` under `masterSeed`.
/// Distinct (seed, suite, replica) triples give distinct keys.
inline Rng replica_stream(std::uint64_t masterSeed, std::uint64_t suite, std::uint64_t replica) noexcept {
  const std::uint64_t k0 = mix64(masterSeed ^ mix64(suite));
  const std::uint64_t k1 = mix64(replica + 0x6A09E667F3BCC909ull * (suite + 1));
  return Rng(Rng::Key{k0, k1 ^ masterSeed});
}

/// Stable 64-bit id for a suite name (FNV-1a).
constexpr std::uint64_t suite_id(std::string_view name) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Variates.

/// Uniform on [0, 1) with 53 random bits.
template <class G>
inline double uniform01(G& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1].
template <class G>
inline double uniform_open0(G& g) {
  return (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard exponential.
template <class G>
inline double exponential(G& g) {
  return -std::log(uniform_open0(g));
}

/// Symmetric Laplace with density e^{-|x|}/2, as a difference of exponentials.
template <class G>
inline double laplace(G& g) {
  return exponential(g) - exponential(g);
}

template <class G>
inline bool bernoulli_half(G& g) {
  return (g() >> 63) != 0;
}

/// Geometric(1/2) on {0, 1, ...}: fair-coin heads before the first tail.
template <class G>
inline std::uint64_t geometric_half(G& g) {
  std::uint64_t heads = 0;
  for (;;) {
    std::uint64_t word = g();
    for (int b = 0; b < 64; ++b, word >>= 1) {
      if ((word & 1u) == 0) return heads;
      ++heads;
    }
  }
}

/// Standard normal (ziggurat).
template <class G>
inline double normal(G& g) {
  return boost::random::normal_distribution<double>(0.0, 1.0)(g);
}

/// Gamma(shape, 1); shape 0 is the point mass at 0.
template <class G>
inline double gamma(G& g, double shape) {
  if (shape <= 0.0) return 0.0;
  return std::gamma_distribution<double>(shape, 1.0)(g);
}

template <class G>
inline std::uint64_t poisson(G& g, double mean) {
  if (mean <= 0.0) return 0;
  return static_cast<std::uint64_t>(std::poisson_distribution<std::int64_t>(mean)(g));
}

}  // namespace lwos
