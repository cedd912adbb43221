#include "hwe_equiv/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hwe_equiv/bootstrap.hpp"
#include "hwe_equiv/errors.hpp"
#include "hwe_equiv/parallel.hpp"

namespace hwe_equiv {

namespace {

// Stream tags keep point generation and power estimation independent.
constexpr std::uint64_t kPowerGridStream = 0x67726964ULL;
constexpr std::uint64_t kSensitivityPoints = 0x73656e73ULL;
constexpr std::uint64_t kSensitivityReps = 0x73726570ULL;
constexpr std::uint64_t kBoundaryPoints = 0x62647279ULL;
constexpr std::uint64_t kBoundaryReps = 0x62726570ULL;
constexpr std::uint64_t kBootstrapStream = 1;

constexpr double kBisectionWidth = 1e-10;

double statistic_distance_squared(const GenotypeDistribution& p, TestKind kind, const ProjectionOptions& proj_opts)
{
    if (kind == TestKind::Conditional) {
        return conditional_distance_squared(p.probs(), p.k());
    }
    const auto proj = project_to_hwe(p, proj_opts);
    if (!proj.converged) {
        throw NonConverged("projection onto the HWE family did not converge");
    }
    return proj.distance * proj.distance;
}

std::vector<double> frequencies(const std::vector<std::int64_t>& counts, std::int64_t n)
{
    std::vector<double> f(counts.size());
    for (std::size_t c = 0; c < f.size(); ++c) {
        f[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
    }
    return f;
}

std::vector<double> hwe_cells_of(std::span<const double> cells, std::size_t k)
{
    std::vector<double> out(cells.size());
    hwe_cells(allele_frequencies(cells, k), out);
    return out;
}

std::vector<double> rates_from_counts(const std::vector<int>& counts, int reps)
{
    std::vector<double> out(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out[i] = static_cast<double>(counts[i]) / static_cast<double>(reps);
    }
    return out;
}

} // namespace

std::vector<TestSelection> all_tests()
{
    return {{TestKind::Conditional, CalibrationKind::Asymptotic},
            {TestKind::Conditional, CalibrationKind::Bootstrap},
            {TestKind::MinimumDistance, CalibrationKind::Asymptotic},
            {TestKind::MinimumDistance, CalibrationKind::Bootstrap}};
}

void StudyConfig::validate() const
{
    if (!(epsilon > 0.0)) {
        throw InvalidArgument("tolerance epsilon must be positive");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0, 1)");
    }
    if (replications < 1) {
        throw InvalidArgument("replications must be at least 1");
    }
    if (eval_points < 1) {
        throw InvalidArgument("eval_points must be at least 1");
    }
    if (tests.empty()) {
        throw InvalidArgument("no tests selected");
    }
    if (bootstrap_B < 2) {
        throw InvalidArgument("bootstrap needs at least 2 replicates");
    }
    if (dataset.n() < 1) {
        throw EmptySample();
    }
    projection.validate();
}

RateSummary summarize(TestSelection test, std::vector<double> rates)
{
    if (rates.empty()) {
        throw InvalidArgument("cannot summarize an empty set of rates");
    }
    RateSummary s;
    s.test = test;
    s.min = *std::min_element(rates.begin(), rates.end());
    s.max = *std::max_element(rates.begin(), rates.end());
    double sum = 0.0;
    for (double r : rates) {
        sum += r;
    }
    s.mean = sum / static_cast<double>(rates.size());
    if (rates.size() > 1) {
        double ss = 0.0;
        for (double r : rates) {
            ss += (r - s.mean) * (r - s.mean);
        }
        s.dev = std::sqrt(ss / static_cast<double>(rates.size() - 1));
    }
    // Keep min <= mean <= max despite rounding in the mean.
    s.mean = std::clamp(s.mean, s.min, s.max);
    s.rates = std::move(rates);
    return s;
}

std::vector<std::vector<int>> count_rejections(std::span<const double> target, std::size_t k, std::int64_t n,
                                               std::span<const double> epsilons, double alpha,
                                               std::span<const TestSelection> tests, int reps, std::uint64_t seed,
                                               int bootstrap_B, const ProjectionOptions& proj_opts)
{
    for (double eps : epsilons) {
        validate_test_inputs(n, eps, alpha);
    }
    bool need_m = false;
    bool boot_c = false;
    bool boot_m = false;
    for (const auto& t : tests) {
        const bool boot = t.calibration == CalibrationKind::Bootstrap;
        if (t.kind == TestKind::MinimumDistance) {
            need_m = true;
            boot_m = boot_m || boot;
        } else {
            boot_c = boot_c || boot;
        }
    }
    const double c_alpha = normal_quantile(alpha);
    const double root_n = std::sqrt(static_cast<double>(n));
    const ProjectionOptions boot_proj{.tolerance = proj_opts.tolerance,
                                      .max_iterations = proj_opts.max_iterations,
                                      .restarts = 0,
                                      .seed = proj_opts.seed};

    // decisions[r][t * |eps| + e]
    std::vector<std::vector<char>> decisions(static_cast<std::size_t>(reps));
    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
        Rng rng = make_rng(seed, {r});
        const auto freqs = frequencies(multinomial(n, target, rng), n);
        const GenotypeVector q(freqs);

        double dist2_c = conditional_distance_squared(freqs, k);
        double sigma_c = std::sqrt(asymptotic_variance(grad_c(q), q));
        double dist2_m = 0.0;
        double sigma_m = 0.0;
        if (need_m) {
            const auto proj = project_to_hwe(GenotypeDistribution(k, freqs), proj_opts);
            if (!proj.converged) {
                throw NonConverged("projection onto the HWE family did not converge");
            }
            dist2_m = proj.distance * proj.distance;
            sigma_m = std::sqrt(asymptotic_variance(grad_m(q, proj.h_of_p), q));
        }
        BootstrapSigmas boot;
        if (boot_c || boot_m) {
            boot = bootstrap_sigmas(freqs, k, n, bootstrap_B, derive_seed(seed, {r, kBootstrapStream}), boot_c,
                                    boot_m, boot_proj);
        }

        auto& row = decisions[r];
        row.resize(tests.size() * epsilons.size());
        for (std::size_t t = 0; t < tests.size(); ++t) {
            const bool is_c = tests[t].kind == TestKind::Conditional;
            const bool is_boot = tests[t].calibration == CalibrationKind::Bootstrap;
            const double dist2 = is_c ? dist2_c : dist2_m;
            const double sigma =
                is_boot ? (is_c ? boot.conditional : boot.minimum_distance) : (is_c ? sigma_c : sigma_m);
            for (std::size_t e = 0; e < epsilons.size(); ++e) {
                const double stat = root_n * (dist2 - epsilons[e] * epsilons[e]);
                row[t * epsilons.size() + e] = rejects(stat, c_alpha * sigma, sigma) ? 1 : 0;
            }
        }
    });

    std::vector<std::vector<int>> counts(tests.size(), std::vector<int>(epsilons.size(), 0));
    for (const auto& row : decisions) {
        for (std::size_t t = 0; t < tests.size(); ++t) {
            for (std::size_t e = 0; e < epsilons.size(); ++e) {
                counts[t][e] += row[t * epsilons.size() + e];
            }
        }
    }
    return counts;
}

double power_at(const GenotypeDistribution& target, std::int64_t n, double epsilon, double alpha, TestSelection test,
                int reps, std::uint64_t seed, int bootstrap_B, const ProjectionOptions& proj_opts)
{
    if (reps < 1) {
        throw InvalidArgument("replications must be at least 1");
    }
    const double eps[] = {epsilon};
    const TestSelection tests[] = {test};
    const auto counts =
        count_rejections(target.probs(), target.k(), n, eps, alpha, tests, reps, seed, bootstrap_B, proj_opts);
    return static_cast<double>(counts[0][0]) / static_cast<double>(reps);
}

PowerGrid power_grid(const StudyConfig& config, std::span<const double> epsilons)
{
    config.validate();
    const auto p_n = from_counts(config.dataset);
    const auto target = hwe_distribution(allele_distribution(p_n));
    const auto counts = count_rejections(target.probs(), target.k(), config.dataset.n(), epsilons, config.alpha,
                                         config.tests, config.replications,
                                         derive_seed(config.seed, {kPowerGridStream}), config.bootstrap_B,
                                         config.projection);
    PowerGrid grid;
    grid.epsilons.assign(epsilons.begin(), epsilons.end());
    grid.tests = config.tests;
    for (const auto& row : counts) {
        grid.rates.push_back(rates_from_counts(row, config.replications));
    }
    return grid;
}

StudySummary sensitivity_study(const StudyConfig& config)
{
    config.validate();
    const auto p_n = from_counts(config.dataset);
    const auto implied = hwe_distribution(allele_distribution(p_n));
    const std::int64_t n = config.dataset.n();
    const double eps[] = {config.epsilon};

    // rates[point][test]
    std::vector<std::vector<double>> rates(static_cast<std::size_t>(config.eval_points));
    for (std::size_t e = 0; e < rates.size(); ++e) {
        Rng rng = make_rng(config.seed, {kSensitivityPoints, e});
        // Power is taken at the HWE law implied by the resampled table, so only
        // the sampling error in the allele frequencies varies between points.
        const auto sample = frequencies(multinomial(n, implied.probs(), rng), n);
        const auto point = hwe_cells_of(sample, p_n.k());
        const auto counts = count_rejections(point, p_n.k(), n, eps, config.alpha, config.tests,
                                             config.replications, derive_seed(config.seed, {kSensitivityReps, e}),
                                             config.bootstrap_B, config.projection);
        for (const auto& row : counts) {
            rates[e].push_back(static_cast<double>(row[0]) / static_cast<double>(config.replications));
        }
    }

    StudySummary summary;
    for (std::size_t t = 0; t < config.tests.size(); ++t) {
        std::vector<double> column;
        for (const auto& point_rates : rates) {
            column.push_back(point_rates[t]);
        }
        summary.rows.push_back(summarize(config.tests[t], std::move(column)));
    }
    return summary;
}

BoundaryPoint random_boundary_point(const GenotypeDistribution& p_n, std::int64_t n, double epsilon, TestKind kind,
                                    Rng& rng, const ProjectionOptions& proj_opts)
{
    validate_test_inputs(n, epsilon, 0.5);
    const double eps2 = epsilon * epsilon;
    const auto implied = hwe_distribution(allele_distribution(p_n));

    std::optional<GenotypeDistribution> accepted;
    int attempts = 0;
    while (attempts < kMaxBoundaryAttempts) {
        ++attempts;
        GenotypeDistribution draw(p_n.k(), frequencies(multinomial(n, p_n.probs(), rng), n));
        if (statistic_distance_squared(draw, kind, proj_opts) >= eps2) {
            accepted = std::move(draw);
            break;
        }
    }
    if (!accepted) {
        throw AbortBoundarySearch("no resample reached the tolerance in " + std::to_string(kMaxBoundaryAttempts) +
                                  " draws; epsilon is too large for this dataset");
    }
    const auto& tilde = *accepted;

    auto mix = [&](double a) {
        std::vector<double> cells(tilde.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            cells[c] = a * tilde.probs()[c] + (1.0 - a) * implied.probs()[c];
        }
        return GenotypeDistribution(tilde.k(), std::move(cells));
    };

    double lo = 0.0;
    double hi = 1.0;
    if (statistic_distance_squared(tilde, kind, proj_opts) > eps2) {
        while (hi - lo > kBisectionWidth) {
            const double mid = 0.5 * (lo + hi);
            if (statistic_distance_squared(mix(mid), kind, proj_opts) < eps2) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    return BoundaryPoint{mix(hi), tilde, hi, attempts};
}

StudySummary boundary_study(const StudyConfig& config)
{
    config.validate();
    const auto p_n = from_counts(config.dataset);
    const std::int64_t n = config.dataset.n();
    const double eps[] = {config.epsilon};

    StudySummary summary;
    for (const auto& t : config.tests) {
        RateSummary placeholder;
        placeholder.test = t;
        summary.rows.push_back(std::move(placeholder));
    }

    for (TestKind kind : {TestKind::Conditional, TestKind::MinimumDistance}) {
        std::vector<TestSelection> tests;
        std::vector<std::size_t> slots;
        for (std::size_t i = 0; i < config.tests.size(); ++i) {
            if (config.tests[i].kind == kind) {
                tests.push_back(config.tests[i]);
                slots.push_back(i);
            }
        }
        if (tests.empty()) {
            continue;
        }
        const auto kind_tag = static_cast<std::uint64_t>(kind);
        std::vector<std::vector<double>> rates(tests.size());
        for (std::size_t e = 0; e < static_cast<std::size_t>(config.eval_points); ++e) {
            Rng rng = make_rng(config.seed, {kBoundaryPoints, kind_tag, e});
            const auto boundary = random_boundary_point(p_n, n, config.epsilon, kind, rng, config.projection);
            const auto counts =
                count_rejections(boundary.point.probs(), p_n.k(), n, eps, config.alpha, tests, config.replications,
                                 derive_seed(config.seed, {kBoundaryReps, kind_tag, e}), config.bootstrap_B,
                                 config.projection);
            for (std::size_t t = 0; t < tests.size(); ++t) {
                rates[t].push_back(static_cast<double>(counts[t][0]) / static_cast<double>(config.replications));
            }
        }
        for (std::size_t t = 0; t < tests.size(); ++t) {
            summary.rows[slots[t]] = summarize(tests[t], std::move(rates[t]));
        }
    }
    return summary;
}

} // namespace hwe_equiv
