#include "hwe_equiv/random.hpp"

#include <algorithm>
#include <cmath>

#include <boost/random/binomial_distribution.hpp>

namespace hwe_equiv {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept
{
    std::uint64_t h = splitmix64(master);
    for (auto t : tags) {
        h = splitmix64(h ^ splitmix64(t + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> flat_dirichlet(std::size_t k, Rng& rng)
{
    std::vector<double> out(k);
    double total = 0.0;
    for (auto& v : out) {
        v = -std::log1p(-uniform01(rng));
        total += v;
    }
    for (auto& v : out) {
        v /= total;
    }
    return out;
}

std::vector<std::int64_t> multinomial(std::int64_t n, std::span<const double> probs, Rng& rng)
{
    std::vector<std::int64_t> counts(probs.size(), 0);
    std::size_t last = probs.size();
    while (last > 0 && probs[last - 1] <= 0.0) {
        --last;
    }
    if (last == 0) {
        return counts;
    }
    std::int64_t remaining = n;
    double mass = 0.0;
    for (std::size_t c = 0; c < last; ++c) {
        mass += probs[c];
    }
    for (std::size_t c = 0; c + 1 < last && remaining > 0; ++c) {
        if (probs[c] <= 0.0) {
            continue;
        }
        const double p = std::clamp(probs[c] / mass, 0.0, 1.0);
        if (p >= 1.0) {
            counts[c] = remaining;
            remaining = 0;
            break;
        }
        boost::random::binomial_distribution<std::int64_t, double> draw(remaining, p);
        counts[c] = draw(rng);
        remaining -= counts[c];
        mass -= probs[c];
        if (mass <= 0.0) {
            break;
        }
    }
    counts[last - 1] += remaining;
    return counts;
}

} // namespace hwe_equiv
