#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace rtsa {

/// Philox4x64-10 counter-based generator (Salmon et al., SC'11).
///
/// Output block b of the stream keyed by (key0, key1) with stream id s is
/// philox(key, counter = {b, s, 0, 0}). Distinct stream ids therefore never
/// share a block, which makes per-replicate streams independent of how
/// replicates are scheduled across threads.
class Philox4x64 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  Philox4x64() : Philox4x64(Key{0, 0}, 0) {}
  Philox4x64(Key key, std::uint64_t stream) : key_(key), stream_(stream) {}

  /// The raw bijection: ten rounds on `counter` under `key`.
  static Block encrypt(Block counter, Key key) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (pos_ == 4) {
      buffer_ = encrypt({block_++, stream_, 0, 0}, key_);
      pos_ = 0;
    }
    return buffer_[pos_++];
  }

  /// Skip `blocks` whole output blocks.
  void discard_blocks(std::uint64_t blocks) noexcept {
    block_ += blocks;
    pos_ = 4;
  }

  friend bool operator==(const Philox4x64&, const Philox4x64&) = default;

 private:
  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  unsigned pos_ = 4;
};

/// Per-trajectory source of randomness: a Philox stream plus the
/// distribution state that goes with it. Not shared between threads.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id)
      : engine_(Philox4x64::Key{seed, 0x5eed5eed5eed5eedULL}, stream_id) {}

  double normal() { return normal_(engine_); }
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  /// +1.0 or -1.0 with equal probability.
  double sign() { return (engine_() >> 63) ? 1.0 : -1.0; }

  Philox4x64& engine() noexcept { return engine_; }

 private:
  Philox4x64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rtsa
