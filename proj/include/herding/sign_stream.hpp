#pragma once

// Counter-based Rademacher streams. Every sign is a pure function of
// (master_seed, path_index, step), so paths can be generated in any order or
// on any number of threads without changing a single value.
//
// Generator: the SplitMix64 output finalizer (Steele, Lea & Flood 2014, the
// 64-bit mixer also used by java.util.SplittableRandom):
//
//   mix64(z) = z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//              z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31
//
//   stream_key = mix64(mix64(master_seed) ^ (path_index * 0xD1B54A32D192ED03))
//   sign(step) = top bit of mix64(stream_key + (step + 1) * 0x9E3779B97F4A7C15)
//                ? +1 : -1

#include <cstddef>
#include <cstdint>
#include <vector>

namespace herding {

using Sign = std::int8_t;

struct SignSource {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
};

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t stream_key(SignSource source) {
  return mix64(mix64(source.master_seed) ^ (source.path_index * 0xD1B54A32D192ED03ULL));
}

constexpr Sign sign_from_key(std::uint64_t key, std::uint64_t step) {
  return (mix64(key + (step + 1) * 0x9E3779B97F4A7C15ULL) >> 63) != 0 ? Sign{1} : Sign{-1};
}

constexpr Sign sign_at(SignSource source, std::uint64_t step) {
  return sign_from_key(stream_key(source), step);
}

std::vector<Sign> signs_from_seed(SignSource source, std::size_t n);

/// Fills `out` in place; used by the kernels to avoid reallocating per path.
void fill_signs(SignSource source, std::vector<Sign>& out);

/// Sign sequence number `index` of {-1,+1}^n in natural binary order: the
/// most significant of the n bits drives step 0, bit value 1 means +1.
std::vector<Sign> signs_from_index(std::uint64_t index, std::size_t n);

}  // namespace herding
