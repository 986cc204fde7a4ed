#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace hermite {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The 128-bit
// counter is split into a 64-bit block index and two 32-bit stream words, so
// every (key, stream0, stream1) triple names an independent substream that
// can be reconstructed from scratch without touching any other stream.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t key, std::uint32_t stream0, std::uint32_t stream1)
      : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
        stream0_(stream0),
        stream1_(stream1) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 2) {
      const Block ctr{static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32), stream0_,
                      stream1_};
      out_ = bijection(ctr, key_);
      ++block_;
      pos_ = 0;
    }
    const result_type r = (static_cast<result_type>(out_[2 * pos_]) << 32) | out_[2 * pos_ + 1];
    ++pos_;
    return r;
  }

  // The keyed 10-round bijection on one 128-bit block.
  static Block bijection(Block ctr, Key key) {
    constexpr std::uint64_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = kM0 * ctr[0];
      const std::uint64_t p1 = kM1 * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }

 private:
  Key key_;
  std::uint32_t stream0_;
  std::uint32_t stream1_;
  std::uint64_t block_ = 0;
  Block out_{};
  int pos_ = 2;
};

}  // namespace hermite
