#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace hwe_equiv {

// All stochastic routines draw from MT19937-64. Independent streams are keyed
// by SplitMix64-mixed seeds derived from a master seed and integer tags, and
// binomial variates come from Boost.Random (inversion / BTRD), so a given
// seed reproduces bit-identical output on any platform.
using Rng = std::mt19937_64;

inline constexpr const char* kRngAlgorithm = "mt19937_64; splitmix64 stream keys; boost binomial (BTRD)";

std::uint64_t splitmix64(std::uint64_t x) noexcept;

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept;

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> tags)
{
    return Rng(derive_seed(master, tags));
}

// Uniform on [0,1) with 53 random bits.
double uniform01(Rng& rng);

// Uniform draw from Dirichlet(1, ..., 1) of dimension k.
std::vector<double> flat_dirichlet(std::size_t k, Rng& rng);

// Multinomial(n, probs) via sequential conditional binomials. Probabilities
// need not be normalized exactly; the last non-empty cell absorbs the rest.
std::vector<std::int64_t> multinomial(std::int64_t n, std::span<const double> probs, Rng& rng);

} // namespace hwe_equiv
