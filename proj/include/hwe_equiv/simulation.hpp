#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hwe_equiv/genotype.hpp"
#include "hwe_equiv/projection.hpp"
#include "hwe_equiv/random.hpp"
#include "hwe_equiv/stats.hpp"

namespace hwe_equiv {

struct TestSelection {
    TestKind kind = TestKind::Conditional;
    CalibrationKind calibration = CalibrationKind::Asymptotic;

    friend bool operator==(const TestSelection&, const TestSelection&) = default;
};

// T_c and T_m, each asymptotic then bootstrap.
std::vector<TestSelection> all_tests();

struct StudyConfig {
    GenotypeCounts dataset;
    double epsilon = 0.1;
    double alpha = 0.05;
    int replications = 1000;
    int eval_points = 100;
    std::uint64_t seed = 0;
    std::vector<TestSelection> tests = all_tests();
    int bootstrap_B = 250;
    ProjectionOptions projection{};

    void validate() const;
};

struct RateSummary {
    TestSelection test;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double dev = 0.0; // sample standard deviation, 0 for a single point
    std::vector<double> rates;
};

struct StudySummary {
    std::vector<RateSummary> rows;
};

RateSummary summarize(TestSelection test, std::vector<double> rates);

// Rejection counts of each selected test at each tolerance, from `reps`
// multinomial(n, target) samples. Sample r draws from derive_seed(seed, {r});
// its bootstrap from derive_seed(seed, {r, 1}). All tolerances and tests share
// the samples.
std::vector<std::vector<int>> count_rejections(std::span<const double> target, std::size_t k, std::int64_t n,
                                               std::span<const double> epsilons, double alpha,
                                               std::span<const TestSelection> tests, int reps, std::uint64_t seed,
                                               int bootstrap_B, const ProjectionOptions& proj_opts);

double power_at(const GenotypeDistribution& target, std::int64_t n, double epsilon, double alpha, TestSelection test,
                int reps, std::uint64_t seed, int bootstrap_B = 250, const ProjectionOptions& proj_opts = {});

struct PowerGrid {
    std::vector<double> epsilons;
    std::vector<TestSelection> tests;
    std::vector<std::vector<double>> rates; // rates[test][epsilon]
};

// Power at e(p_n), the HWE law implied by config.dataset. config.epsilon and
// config.eval_points are unused.
PowerGrid power_grid(const StudyConfig& config, std::span<const double> epsilons);

// Power at eval_points HWE laws e(p~), where each p~ is a frequency table of
// size n drawn from e(p_n), at config.epsilon.
StudySummary sensitivity_study(const StudyConfig& config);

struct BoundaryPoint {
    GenotypeDistribution point;
    GenotypeDistribution resample; // the accepted draw p~
    double mixing_weight = 1.0;    // a_n
    int attempts = 0;              // draws until acceptance
};

inline constexpr int kMaxBoundaryAttempts = 1000;

/// Random point on the boundary of H0 near the data: draw p~ from p_n until
/// its statistic is non-negative, then bisect on a in [0, 1] for the root of
/// T(a p~ + (1 - a) e(p_n)).
BoundaryPoint random_boundary_point(const GenotypeDistribution& p_n, std::int64_t n, double epsilon, TestKind kind,
                                    Rng& rng, const ProjectionOptions& proj_opts = {});

// Power at eval_points random boundary points of H0 at config.epsilon. Each
// statistic is evaluated at boundary points generated for that statistic.
StudySummary boundary_study(const StudyConfig& config);

} // namespace hwe_equiv
