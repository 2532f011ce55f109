// Counter-based random number generation (Philox4x32-10).
//
// A stream is addressed by (seed, stream id): the 64-bit seed is the cipher
// key, the 64-bit stream id sits in the upper counter words, and the block
// index in the lower ones. Streams never overlap and any (seed, stream) pair
// reproduces the same sequence regardless of what other streams were drawn,
// which is what makes replicate-parallel simulation deterministic.
#pragma once

#include <cstdint>

namespace episcan::rng {

struct Philox4x32Output {
  std::uint32_t v[4];
};

// One keyed block of Philox4x32 with 10 rounds; exposed for known-answer
// tests.
Philox4x32Output philox4x32_10(const std::uint32_t counter[4],
                               const std::uint32_t key[2]);

class Stream {
public:
  Stream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : seed_(seed), stream_id_(stream_id) {
    key_[0] = static_cast<std::uint32_t>(seed);
    key_[1] = static_cast<std::uint32_t>(seed >> 32);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint32_t next_u32() noexcept {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() noexcept {
    std::uint64_t lo = next_u32();
    std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

private:
  void refill() noexcept {
    std::uint32_t ctr[4] = {static_cast<std::uint32_t>(block_),
                            static_cast<std::uint32_t>(block_ >> 32),
                            static_cast<std::uint32_t>(stream_id_),
                            static_cast<std::uint32_t>(stream_id_ >> 32)};
    Philox4x32Output out = philox4x32_10(ctr, key_);
    buf_[0] = out.v[0];
    buf_[1] = out.v[1];
    buf_[2] = out.v[2];
    buf_[3] = out.v[3];
    ++block_;
    pos_ = 0;
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint32_t key_[2];
  std::uint64_t block_ = 0;
  std::uint32_t buf_[4] = {0, 0, 0, 0};
  int pos_ = 4;
};

// Stream-id layout used across the project: an 8-bit purpose tag, a 32-bit
// replicate (or cell-replicate) index and a 24-bit sub index.
enum class Purpose : std::uint64_t {
  Genotype = 1,
  Phenotype = 2,
  Generic = 3,
};

inline std::uint64_t stream_id(Purpose purpose, std::uint64_t replicate,
                               std::uint64_t sub = 0) noexcept {
  return (static_cast<std::uint64_t>(purpose) << 56) |
         ((replicate & 0xffffffffULL) << 24) | (sub & 0xffffffULL);
}

inline Stream make_stream(std::uint64_t seed, Purpose purpose,
                          std::uint64_t replicate,
                          std::uint64_t sub = 0) noexcept {
  return Stream(seed, stream_id(purpose, replicate, sub));
}

}  // namespace episcan::rng
