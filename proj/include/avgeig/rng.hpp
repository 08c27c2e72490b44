#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace avgeig {

/// Philox4x32-10 counter-based block function (Salmon et al., Random123).
/// Maps a 128-bit counter and a 64-bit key to 128 pseudo-random bits.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

/// Sequential random stream over Philox4x32-10.
///
/// A stream is identified by (seed, stream id). The seed is the Philox key,
/// the stream id occupies the upper 64 bits of the counter and the position
/// within the stream the lower 64 bits. Draw `i` of any Monte Carlo loop uses
/// stream id `i`, so results do not depend on which worker ran the draw.
class RandomStream {
 public:
  using result_type = std::uint32_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() noexcept { return next_u32(); }

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1].
  double uniform_open_low() noexcept { return 1.0 - uniform(); }
  /// Standard normal (Box-Muller, one value per call).
  double normal() noexcept;

 private:
  Philox4x32::Key key_;
  std::uint64_t position_ = 0;
  std::uint64_t stream_;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
};

/// Stream id for a two-level index (e.g. grid cell and draw).
constexpr std::uint64_t substream(std::uint64_t outer, std::uint64_t inner) noexcept {
  return (outer << 32) ^ inner;
}

}  // namespace avgeig
