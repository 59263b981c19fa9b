#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace kkle {

using Seed = std::uint64_t;
using Rng = std::mt19937_64;

/// Derives an independent sub-seed from a parent seed and a tag. Used to give
/// each consumer (feature sampling, minibatching, permutations, ...) its own
/// stream so that adding randomness in one place never perturbs another.
Seed derive_seed(Seed parent, std::string_view tag);
Seed derive_seed(Seed parent, std::uint64_t a, std::uint64_t b = 0);

}  // namespace kkle
