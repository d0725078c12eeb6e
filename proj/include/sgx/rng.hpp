#pragma once

#include <array>
#include <cstdint>
#include <string_view>

// Counter-based random numbers (Philox-4x32-10, Salmon et al., SC 2011).
//
// Every random quantity in this project is addressed, not drawn: a value is a
// pure function of (seed, stream, counter).  Streams are derived from string
// labels plus integer indices, so parallel workers and re-ordered loops see
// identical numbers.

namespace sgx::rng {

// One 128-bit Philox block: counter (c0..c3), key (k0,k1) -> 4x u32.
std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& counter,
                                   const std::array<uint32_t, 2>& key);

// FNV-1a over bytes; used to turn labels into stream ids.
uint64_t fnv1a64(std::string_view bytes);

// Derives a child seed from (seed, label, index).  Children with distinct
// labels or indices are statistically independent.
uint64_t derive_seed(uint64_t seed, std::string_view label, uint64_t index = 0);

// Stateless access: the `index`-th block of the stream (seed, stream_id).
std::array<uint32_t, 4> block_at(uint64_t seed, uint64_t stream_id, uint64_t index);

// Uniform in (0,1], from 53 bits of a u64.
double u64_to_unit(uint64_t x);

// The `index`-th pair of independent standard normals of a stream
// (Box-Muller on one Philox block).
struct NormalPair {
  double z0;
  double z1;
};
NormalPair normal_pair(uint64_t seed, uint64_t stream_id, uint64_t index);

// Small sequential generator over one stream, for chain-style consumers.
class Stream {
 public:
  Stream(uint64_t seed, uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}
  Stream(uint64_t seed, std::string_view label, uint64_t index = 0)
      : Stream(derive_seed(seed, label, index), fnv1a64(label)) {}

  uint64_t next_u64();
  double next_unit();    // (0,1]
  double next_normal();  // N(0,1)

 private:
  uint64_t seed_;
  uint64_t stream_id_;
  uint64_t counter_ = 0;
  // one Philox block yields two u64 / two normals; cache the second
  bool has_spare_u64_ = false;
  uint64_t spare_u64_ = 0;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace sgx::rng
