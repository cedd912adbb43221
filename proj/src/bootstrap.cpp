#include "hwe_equiv/bootstrap.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "hwe_equiv/errors.hpp"

namespace hwe_equiv {

namespace {

double sample_sd(const std::vector<double>& xs)
{
    if (xs.size() < 2) {
        return 0.0;
    }
    double mean = 0.0;
    for (double x : xs) {
        mean += x;
    }
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

} // namespace

void BootstrapOptions::validate() const
{
    if (replicates < 2) {
        throw InvalidArgument("bootstrap needs at least 2 replicates");
    }
    projection.validate();
}

GenotypeCounts resample(const GenotypeDistribution& p_n, std::int64_t n, Rng& rng)
{
    if (n < 1) {
        throw InvalidArgument("sample size must be at least 1");
    }
    return GenotypeCounts(p_n.k(), multinomial(n, p_n.probs(), rng));
}

BootstrapSigmas bootstrap_sigmas(std::span<const double> cells, std::size_t k, std::int64_t n, int replicates,
                                 std::uint64_t seed, bool conditional, bool minimum_distance,
                                 const ProjectionOptions& proj_opts)
{
    if (replicates < 2) {
        throw InvalidArgument("bootstrap needs at least 2 replicates");
    }
    const double root_n = std::sqrt(static_cast<double>(n));
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<double> stat_c;
    std::vector<double> stat_m;
    stat_c.reserve(conditional ? replicates : 0);
    stat_m.reserve(minimum_distance ? replicates : 0);
    std::vector<double> freqs(cells.size());

    BootstrapSigmas out;
    out.replicates = replicates;
    for (int b = 0; b < replicates; ++b) {
        Rng rng = make_rng(seed, {static_cast<std::uint64_t>(b)});
        const auto counts = multinomial(n, cells, rng);
        for (std::size_t c = 0; c < freqs.size(); ++c) {
            freqs[c] = static_cast<double>(counts[c]) * inv_n;
        }
        if (conditional) {
            stat_c.push_back(root_n * conditional_distance_squared(freqs, k));
        }
        if (minimum_distance) {
            const auto proj = min_distance_squared(freqs, k, proj_opts);
            if (proj.converged) {
                stat_m.push_back(root_n * proj.distance_squared);
            } else {
                ++out.skipped;
            }
        }
    }
    if (out.skipped > kMaxSkippedFraction * replicates) {
        throw NonConverged("projection failed in " + std::to_string(out.skipped) + " of " +
                           std::to_string(replicates) + " bootstrap replicates");
    }
    out.conditional = sample_sd(stat_c);
    out.minimum_distance = sample_sd(stat_m);
    return out;
}

double bootstrap_sigma(const GenotypeDistribution& p_n, std::int64_t n, const BootstrapOptions& opts)
{
    opts.validate();
    if (n < 1) {
        throw InvalidArgument("sample size must be at least 1");
    }
    const bool conditional = opts.kind == TestKind::Conditional;
    const auto s = bootstrap_sigmas(p_n.probs(), p_n.k(), n, opts.replicates, opts.seed, conditional, !conditional,
                                    opts.projection);
    return conditional ? s.conditional : s.minimum_distance;
}

TestResult run_bootstrap_test(const GenotypeDistribution& p_n, std::int64_t n, double epsilon, double alpha,
                              const BootstrapOptions& opts)
{
    validate_test_inputs(n, epsilon, alpha);
    const double sigma = bootstrap_sigma(p_n, n, opts);
    double distance = 0.0;
    if (opts.kind == TestKind::Conditional) {
        distance = l2_distance(p_n, hwe_distribution(allele_distribution(p_n)));
    } else {
        const auto proj = project_to_hwe(p_n);
        if (!proj.converged) {
            throw NonConverged("projection onto the HWE family did not converge");
        }
        distance = proj.distance;
    }
    return decide(opts.kind, CalibrationKind::Bootstrap, distance, sigma, n, epsilon, alpha);
}

} // namespace hwe_equiv
