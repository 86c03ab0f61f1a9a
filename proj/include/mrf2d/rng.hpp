#pragma once

#include <cstdint>
#include <random>

namespace mrf2d {

/// Named random streams derived from one master seed. Experiments can vary a
/// single stream (e.g. the noise) while freezing the others, and Monte-Carlo
/// trials get independent streams indexed by trial number so results do not
/// depend on worker count or scheduling.
enum class Stream : std::uint64_t {
  Source = 0x01,
  Interleaver = 0x02,
  Noise = 0x03,
  Relaxation = 0x04,
  Bsc = 0x05,
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Deterministic sub-seed for (master, stream, index).
inline std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
  std::uint64_t s = detail::splitmix64(master);
  s = detail::splitmix64(s ^ static_cast<std::uint64_t>(stream));
  s = detail::splitmix64(s ^ index);
  return s;
}

inline std::mt19937_64 make_rng(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
  return std::mt19937_64(derive_seed(master, stream, index));
}

}  // namespace mrf2d
