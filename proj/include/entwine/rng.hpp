#pragma once

#include <array>
#include <cstdint>

namespace entwine {

/// Philox4x32-10 counter-based generator.
///
/// Stream layout: the 64-bit key carries the master seed, counter words 2..3
/// carry the stream (walker) index and counter words 0..1 the block index
/// within the stream. child(seed, i) therefore yields fully independent,
/// reproducible streams regardless of scheduling, which is what makes
/// ensemble results bit-identical across worker counts.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream) {
    key_[0] = static_cast<std::uint32_t>(seed);
    key_[1] = static_cast<std::uint32_t>(seed >> 32);
    stream_[0] = static_cast<std::uint32_t>(stream);
    stream_[1] = static_cast<std::uint32_t>(stream >> 32);
  }

  static PhiloxStream child(std::uint64_t master_seed, std::uint64_t index) {
    return PhiloxStream(master_seed, index);
  }

  std::uint32_t next_u32() {
    if (have_ == 0) refill();
    return buf_[4 - have_--];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMult0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMult1) * ctr[2];
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMult0 = 0xD2511F53u;
  static constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  void refill() {
    buf_ = block({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                  stream_[0], stream_[1]},
                 key_);
    ++block_;
    have_ = 4;
  }

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 2> stream_{};
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int have_ = 0;
};

}  // namespace entwine
