#pragma once

#include <cstdint>

#include "hwe_equiv/genotype.hpp"
#include "hwe_equiv/projection.hpp"
#include "hwe_equiv/random.hpp"
#include "hwe_equiv/stats.hpp"

namespace hwe_equiv {

struct BootstrapOptions {
    int replicates = 500;
    std::uint64_t seed = 0;
    TestKind kind = TestKind::Conditional;
    // Replicates start the projection from their own allele frequencies only.
    ProjectionOptions projection{.restarts = 0};

    void validate() const;
};

// Share of replicates whose projection may fail before the estimate is refused.
inline constexpr double kMaxSkippedFraction = 0.01;

GenotypeCounts resample(const GenotypeDistribution& p_n, std::int64_t n, Rng& rng);

/// Bootstrap standard deviations of sqrt(n) * distance^2 for one or both
/// statistics, computed on a shared set of resamples. Replicate b draws from
/// the stream derive_seed(seed, {b}), so the value for one kind does not
/// depend on whether the other kind was requested.
struct BootstrapSigmas {
    double conditional = 0.0;
    double minimum_distance = 0.0;
    int replicates = 0;
    int skipped = 0; // minimum-distance replicates dropped for non-convergence
};

BootstrapSigmas bootstrap_sigmas(std::span<const double> cells, std::size_t k, std::int64_t n, int replicates,
                                 std::uint64_t seed, bool conditional, bool minimum_distance,
                                 const ProjectionOptions& proj_opts);

double bootstrap_sigma(const GenotypeDistribution& p_n, std::int64_t n, const BootstrapOptions& opts);

TestResult run_bootstrap_test(const GenotypeDistribution& p_n, std::int64_t n, double epsilon, double alpha,
                              const BootstrapOptions& opts);

} // namespace hwe_equiv
