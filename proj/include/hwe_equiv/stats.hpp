#pragma once

#include <cstdint>
#include <string_view>

#include "hwe_equiv/genotype.hpp"
#include "hwe_equiv/projection.hpp"

namespace hwe_equiv {

enum class TestKind {
    Conditional,     // distance to e(p), the HWE law with p's allele frequencies
    MinimumDistance, // distance to the nearest HWE law
};

enum class CalibrationKind { Asymptotic, Bootstrap };

std::string_view to_string(TestKind kind) noexcept;
std::string_view to_string(CalibrationKind calibration) noexcept;

struct TestResult {
    TestKind kind = TestKind::Conditional;
    CalibrationKind calibration = CalibrationKind::Asymptotic;
    double statistic = 0.0;      // sqrt(n) (distance^2 - epsilon^2)
    double sigma = 0.0;          // estimated standard deviation of the statistic
    double alpha = 0.05;
    double critical_value = 0.0; // lower alpha-quantile times sigma
    bool reject = false;         // true establishes equivalence to HWE
    double epsilon = 0.0;
    double distance = 0.0;       // l2(p, e(p)) or d(p, M)
    double min_epsilon = 0.0;
    std::int64_t n = 0;
};

// Lower alpha-quantile of the standard normal distribution.
double normal_quantile(double alpha);

double t_c(const GenotypeDistribution& p_n, std::int64_t n, double epsilon);
double t_m(std::int64_t n, double epsilon, const ProjectionResult& proj);

// Gradient of q -> l2^2(q, e(q)) where e depends on q through its allele
// frequencies.
GenotypeVector grad_c(const GenotypeVector& q);

// Gradient of q -> l2^2(q, h) for fixed h: 2 (q - h).
GenotypeVector grad_m(const GenotypeVector& q, const GenotypeDistribution& h);

// grad' (D_q - q q') grad.
double asymptotic_variance(const GenotypeVector& grad, const GenotypeVector& q);

// Delta-method standard deviation of the statistic at p_n. For the
// minimum-distance statistic the projection of p_n must be supplied.
double asymptotic_sigma(const GenotypeDistribution& p_n, TestKind kind, const ProjectionResult* proj = nullptr);

// Smallest tolerance for which the test rejects, given the observed distance
// (not squared) and the standard deviation in use.
double min_epsilon_from_distance(double distance, std::int64_t n, double alpha, double sigma);

double min_epsilon(const GenotypeDistribution& p_n, std::int64_t n, double alpha, TestKind kind, double sigma,
                   const ProjectionOptions& proj_opts = {});

// Reject when T <= c_alpha sigma; with sigma == 0 reject when T < 0.
constexpr bool rejects(double statistic, double critical_value, double sigma) noexcept
{
    return sigma > 0.0 ? statistic <= critical_value : statistic < 0.0;
}

// Applies rejects() and fills every field of TestResult.
TestResult decide(TestKind kind, CalibrationKind calibration, double distance, double sigma, std::int64_t n,
                  double epsilon, double alpha);

TestResult run_asymptotic_test(const GenotypeDistribution& p_n, std::int64_t n, double epsilon, double alpha,
                               TestKind kind, const ProjectionOptions& proj_opts = {});

void validate_test_inputs(std::int64_t n, double epsilon, double alpha);

} // namespace hwe_equiv
