#include "sgx/rng.hpp"

#include <cmath>

namespace sgx::rng {

namespace {

constexpr uint32_t kPhiloxW32A = 0x9E3779B9u;
constexpr uint32_t kPhiloxW32B = 0xBB67AE85u;
constexpr uint32_t kPhiloxM4x32A = 0xD2511F53u;
constexpr uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void mul_hi_lo(uint32_t a, uint32_t b, uint32_t& lo, uint32_t& hi) {
  uint64_t p = static_cast<uint64_t>(a) * b;
  lo = static_cast<uint32_t>(p);
  hi = static_cast<uint32_t>(p >> 32);
}

inline void round_once(std::array<uint32_t, 4>& c, const std::array<uint32_t, 2>& k) {
  uint32_t lo0, hi0, lo1, hi1;
  mul_hi_lo(kPhiloxM4x32A, c[0], lo0, hi0);
  mul_hi_lo(kPhiloxM4x32B, c[2], lo1, hi1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& counter,
                                   const std::array<uint32_t, 2>& key) {
  std::array<uint32_t, 4> c = counter;
  std::array<uint32_t, 2> k = key;
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      k[0] += kPhiloxW32A;
      k[1] += kPhiloxW32B;
    }
    round_once(c, k);
  }
  return c;
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::array<uint32_t, 4> block_at(uint64_t seed, uint64_t stream_id, uint64_t index) {
  std::array<uint32_t, 4> counter = {
      static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32),
      static_cast<uint32_t>(stream_id), static_cast<uint32_t>(stream_id >> 32)};
  std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed),
                                 static_cast<uint32_t>(seed >> 32)};
  return philox4x32(counter, key);
}

uint64_t derive_seed(uint64_t seed, std::string_view label, uint64_t index) {
  auto b = block_at(seed, fnv1a64(label), index);
  return (static_cast<uint64_t>(b[0]) << 32) | b[1];
}

double u64_to_unit(uint64_t x) {
  // 53-bit mantissa, shifted into (0,1] so log() is always finite
  return (static_cast<double>(x >> 11) + 1.0) * 0x1p-53;
}

NormalPair normal_pair(uint64_t seed, uint64_t stream_id, uint64_t index) {
  auto b = block_at(seed, stream_id, index);
  uint64_t x = (static_cast<uint64_t>(b[0]) << 32) | b[1];
  uint64_t y = (static_cast<uint64_t>(b[2]) << 32) | b[3];
  double u = u64_to_unit(x);
  double v = u64_to_unit(y);
  double rho = std::sqrt(-2.0 * std::log(u));
  return {rho * std::cos(2.0 * M_PI * v), rho * std::sin(2.0 * M_PI * v)};
}

uint64_t Stream::next_u64() {
  if (has_spare_u64_) {
    has_spare_u64_ = false;
    return spare_u64_;
  }
  auto b = block_at(seed_, stream_id_, counter_++);
  spare_u64_ = (static_cast<uint64_t>(b[2]) << 32) | b[3];
  has_spare_u64_ = true;
  return (static_cast<uint64_t>(b[0]) << 32) | b[1];
}

double Stream::next_unit() { return u64_to_unit(next_u64()); }

double Stream::next_normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  // draw a fresh block through normal_pair to keep the two paths identical
  has_spare_u64_ = false;
  NormalPair p = normal_pair(seed_, stream_id_, counter_++);
  spare_normal_ = p.z1;
  has_spare_normal_ = true;
  return p.z0;
}

}  // namespace sgx::rng
