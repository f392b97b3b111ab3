#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gbb {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based fan-out of a master seed: every (tag, i, j, ...) path maps to
// an independent stream, so work can execute in any order.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  return Rng(derive_seed(master, path));
}

// Stream tags used by the experiment runner.
namespace stream {
inline constexpr std::uint64_t graph = 1;
inline constexpr std::uint64_t matrix = 2;
inline constexpr std::uint64_t policy_run = 3;
}  // namespace stream

}  // namespace gbb
