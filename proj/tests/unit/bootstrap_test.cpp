#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "hwe_equiv/bootstrap.hpp"
#include "hwe_equiv/datasets.hpp"
#include "hwe_equiv/errors.hpp"

using namespace hwe_equiv;

namespace {

GenotypeDistribution dataset(int id)
{
    return from_counts(*builtin_dataset(id));
}

} // namespace

TEST(Resample, PointMass)
{
    const GenotypeDistribution p(3, {0.0, 0.0, 0.0, 0.0, 1.0, 0.0});
    Rng rng = make_rng(1, {});
    const auto counts = resample(p, 57, rng);
    EXPECT_EQ(counts.n(), 57);
    EXPECT_EQ(counts(2, 1), 57);
}

TEST(Resample, SeedReproducesCounts)
{
    const auto p = dataset(3);
    Rng a = make_rng(42, {7});
    Rng b = make_rng(42, {7});
    EXPECT_EQ(resample(p, 8297, a), resample(p, 8297, b));
    Rng c = make_rng(43, {7});
    EXPECT_NE(resample(p, 8297, a), resample(p, 8297, c));
}

TEST(Multinomial, MeanMatchesProbabilities)
{
    const std::vector<double> probs{0.1, 0.2, 0.3, 0.4};
    Rng rng = make_rng(5, {});
    std::vector<double> total(4, 0.0);
    const int draws = 20000;
    for (int d = 0; d < draws; ++d) {
        const auto x = multinomial(50, probs, rng);
        EXPECT_EQ(std::accumulate(x.begin(), x.end(), std::int64_t{0}), 50);
        for (std::size_t i = 0; i < 4; ++i) {
            total[i] += static_cast<double>(x[i]);
        }
    }
    for (std::size_t i = 0; i < 4; ++i) {
        const double sd = std::sqrt(50 * probs[i] * (1 - probs[i]) / draws);
        EXPECT_NEAR(total[i] / draws, 50 * probs[i], 5 * sd);
    }
}

TEST(BootstrapSigma, DegenerateResamplesGiveZero)
{
    const GenotypeDistribution p(2, {1.0, 0.0, 0.0});
    EXPECT_EQ(bootstrap_sigma(p, 20, {.replicates = 2}), 0.0);
    EXPECT_EQ(bootstrap_sigma(p, 20, {.replicates = 2, .kind = TestKind::MinimumDistance}), 0.0);
}

TEST(BootstrapSigma, RequiresTwoReplicates)
{
    EXPECT_THROW(bootstrap_sigma(dataset(1), 230, {.replicates = 1}), InvalidArgument);
}

TEST(BootstrapSigma, DatasetOneConditionalMinEpsilon)
{
    const auto p = dataset(1);
    const double sigma = bootstrap_sigma(p, 230, {.replicates = 500});
    const double l2 = l2_distance(p, hwe_distribution(allele_distribution(p)));
    EXPECT_NEAR(min_epsilon_from_distance(l2, 230, 0.05, sigma), 0.134, 0.003);
}

TEST(BootstrapSigma, Deterministic)
{
    const auto p = dataset(2);
    const BootstrapOptions opts{.replicates = 200, .seed = 9, .kind = TestKind::MinimumDistance};
    EXPECT_EQ(bootstrap_sigma(p, 229, opts), bootstrap_sigma(p, 229, opts));
    const auto a = run_bootstrap_test(p, 229, 0.15, 0.05, opts);
    const auto b = run_bootstrap_test(p, 229, 0.15, 0.05, opts);
    EXPECT_EQ(a.sigma, b.sigma);
    EXPECT_EQ(a.statistic, b.statistic);
    EXPECT_EQ(a.min_epsilon, b.min_epsilon);
}

TEST(BootstrapSigma, IndependentOfEpsilon)
{
    const auto p = dataset(1);
    const BootstrapOptions opts{.replicates = 100, .seed = 4};
    const auto lo = run_bootstrap_test(p, 230, 0.05, 0.05, opts);
    const auto hi = run_bootstrap_test(p, 230, 0.30, 0.05, opts);
    EXPECT_EQ(lo.sigma, hi.sigma);
    EXPECT_EQ(lo.min_epsilon, hi.min_epsilon);
}

TEST(BootstrapSigma, SharedResamplesMatchSingleKind)
{
    const auto p = dataset(1);
    const auto both = bootstrap_sigmas(p.probs(), p.k(), 230, 50, 3, true, true, {.restarts = 0});
    EXPECT_EQ(both.conditional, bootstrap_sigma(p, 230, {.replicates = 50, .seed = 3}));
    EXPECT_EQ(both.minimum_distance,
              bootstrap_sigma(p, 230, {.replicates = 50, .seed = 3, .kind = TestKind::MinimumDistance}));
    EXPECT_EQ(both.skipped, 0);
}

TEST(BootstrapSigma, SeedSpreadIsSmall)
{
    const auto p = dataset(1);
    std::vector<double> sigmas;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        sigmas.push_back(bootstrap_sigma(p, 230, {.replicates = 500, .seed = seed}));
    }
    const double mean = std::accumulate(sigmas.begin(), sigmas.end(), 0.0) / 50.0;
    double ss = 0.0;
    for (double s : sigmas) {
        ss += (s - mean) * (s - mean);
    }
    EXPECT_LT(std::sqrt(ss / 49.0) / mean, 0.10);
}

TEST(BootstrapSigma, TooManyFailedProjectionsThrow)
{
    const auto p = dataset(1);
    const BootstrapOptions opts{
        .replicates = 20, .kind = TestKind::MinimumDistance, .projection = {.max_iterations = 1, .restarts = 0}};
    EXPECT_THROW(bootstrap_sigma(p, 230, opts), NonConverged);
}

TEST(RunBootstrapTest, DatasetTwoConditional)
{
    const auto r = run_bootstrap_test(dataset(2), 229, 0.1, 0.05, {.replicates = 500});
    EXPECT_NEAR(r.min_epsilon, 0.164, 0.004);
    EXPECT_EQ(r.calibration, CalibrationKind::Bootstrap);
}

TEST(RunBootstrapTest, DatasetThreeMinimumDistance)
{
    const auto p = dataset(3);
    const auto r = run_bootstrap_test(p, 8297, 0.1, 0.05, {.replicates = 500, .kind = TestKind::MinimumDistance});
    EXPECT_NEAR(r.min_epsilon, 0.018, 0.001);
}

TEST(RunBootstrapTest, RejectsAboveMinEpsilon)
{
    const auto p = dataset(1);
    const BootstrapOptions opts{.replicates = 200, .seed = 1};
    const auto base = run_bootstrap_test(p, 230, 0.1, 0.05, opts);
    EXPECT_TRUE(run_bootstrap_test(p, 230, base.min_epsilon + 1e-4, 0.05, opts).reject);
    EXPECT_FALSE(run_bootstrap_test(p, 230, base.min_epsilon - 1e-4, 0.05, opts).reject);
}

TEST(Properties, BootstrapNotLessConservative)
{
    for (int id : {1, 2, 3}) {
        const auto p = dataset(id);
        const auto n = builtin_dataset(id)->n();
        for (auto kind : {TestKind::Conditional, TestKind::MinimumDistance}) {
            const auto asym = run_asymptotic_test(p, n, 0.1, 0.05, kind);
            const auto boot = run_bootstrap_test(p, n, 0.1, 0.05, {.replicates = 500, .kind = kind});
            EXPECT_GE(boot.min_epsilon, asym.min_epsilon - 0.001) << "dataset " << id;
        }
    }
}
