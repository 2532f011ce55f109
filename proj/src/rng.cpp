#include "episcan/rng.hpp"

namespace episcan::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::uint32_t ctr[4], const std::uint32_t key[2]) {
  std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
  std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
  std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  std::uint32_t out0 = hi1 ^ ctr[1] ^ key[0];
  std::uint32_t out2 = hi0 ^ ctr[3] ^ key[1];
  ctr[0] = out0;
  ctr[1] = lo1;
  ctr[2] = out2;
  ctr[3] = lo0;
}

}  // namespace

Philox4x32Output philox4x32_10(const std::uint32_t counter[4],
                               const std::uint32_t key[2]) {
  std::uint32_t ctr[4] = {counter[0], counter[1], counter[2], counter[3]};
  std::uint32_t k[2] = {key[0], key[1]};
  round_once(ctr, k);
  for (int i = 1; i < 10; ++i) {
    k[0] += kWeyl0;
    k[1] += kWeyl1;
    round_once(ctr, k);
  }
  return Philox4x32Output{{ctr[0], ctr[1], ctr[2], ctr[3]}};
}

}  // namespace episcan::rng
