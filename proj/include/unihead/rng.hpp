#pragma once

#include <cstdint>
#include <random>

namespace unihead {

// splitmix64 finalizer, used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t z);

// Child seed for a named stage or chunk of a parent seed.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream);

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(mix64(seed)); }

}  // namespace unihead
