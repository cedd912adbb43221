#include "hwe_equiv/stats.hpp"

#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "hwe_equiv/errors.hpp"

namespace hwe_equiv {

std::string_view to_string(TestKind kind) noexcept
{
    return kind == TestKind::Conditional ? "c" : "m";
}

std::string_view to_string(CalibrationKind calibration) noexcept
{
    return calibration == CalibrationKind::Asymptotic ? "asym" : "boot";
}

void validate_test_inputs(std::int64_t n, double epsilon, double alpha)
{
    if (n < 1) {
        throw InvalidArgument("sample size must be at least 1");
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw InvalidArgument("tolerance epsilon must be positive");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("alpha must lie in (0, 1)");
    }
}

double normal_quantile(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidArgument("quantile level must lie in (0, 1)");
    }
    return boost::math::quantile(boost::math::normal_distribution<double>(), alpha);
}

double t_c(const GenotypeDistribution& p_n, std::int64_t n, double epsilon)
{
    validate_test_inputs(n, epsilon, 0.5);
    const double l2 = l2_distance(p_n, hwe_distribution(allele_distribution(p_n)));
    return std::sqrt(static_cast<double>(n)) * (l2 * l2 - epsilon * epsilon);
}

double t_m(std::int64_t n, double epsilon, const ProjectionResult& proj)
{
    validate_test_inputs(n, epsilon, 0.5);
    if (!proj.converged) {
        throw NonConverged("projection onto the HWE family did not converge");
    }
    return std::sqrt(static_cast<double>(n)) * (proj.distance * proj.distance - epsilon * epsilon);
}

GenotypeVector grad_c(const GenotypeVector& q)
{
    const std::size_t k = q.k();
    const auto cells = q.entries();
    const auto a = allele_frequencies(cells, k);

    std::vector<double> residual(cells.size());
    hwe_cells(a, residual);
    for (std::size_t c = 0; c < residual.size(); ++c) {
        residual[c] = cells[c] - residual[c];
    }

    // Pull the residual back through the HWE map: w = J_e(a)' r.
    std::vector<double> w(k, 0.0);
    std::size_t c = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < i; ++j, ++c) {
            w[i] += 2.0 * a[j] * residual[c];
            w[j] += 2.0 * a[i] * residual[c];
        }
        w[i] += 2.0 * a[i] * residual[c];
        ++c;
    }

    // Then through the allele map: grad = 2 (r - J_a' w).
    std::vector<double> grad(cells.size());
    c = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < i; ++j, ++c) {
            grad[c] = 2.0 * (residual[c] - 0.5 * (w[i] + w[j]));
        }
        grad[c] = 2.0 * (residual[c] - w[i]);
        ++c;
    }
    return GenotypeVector(std::move(grad));
}

GenotypeVector grad_m(const GenotypeVector& q, const GenotypeDistribution& h)
{
    if (q.size() != h.size()) {
        throw DimensionMismatch("gradient point and minimizer differ in length");
    }
    std::vector<double> grad(q.size());
    for (std::size_t c = 0; c < grad.size(); ++c) {
        grad[c] = 2.0 * (q[c] - h.probs()[c]);
    }
    return GenotypeVector(std::move(grad));
}

double asymptotic_variance(const GenotypeVector& grad, const GenotypeVector& q)
{
    if (grad.size() != q.size()) {
        throw DimensionMismatch("gradient and probability vector differ in length");
    }
    // g' D_q g - (q' g)^2, evaluated about the q-weighted mean of g so the two
    // terms do not cancel catastrophically.
    double mean = 0.0;
    for (std::size_t c = 0; c < q.size(); ++c) {
        mean += q[c] * grad[c];
    }
    double var = 0.0;
    double mass = 0.0;
    for (std::size_t c = 0; c < q.size(); ++c) {
        const double centred = grad[c] - mean;
        var += q[c] * centred * centred;
        mass += q[c];
    }
    // (1 - mass) mean^2 corrects for q not summing to exactly one.
    var += (1.0 - mass) * mean * mean;
    if (var < -1e-12) {
        throw NumericalFailure("negative asymptotic variance");
    }
    return std::max(var, 0.0);
}

double asymptotic_sigma(const GenotypeDistribution& p_n, TestKind kind, const ProjectionResult* proj)
{
    const auto q = vectorize(p_n);
    if (kind == TestKind::Conditional) {
        return std::sqrt(asymptotic_variance(grad_c(q), q));
    }
    if (proj == nullptr) {
        throw InvalidArgument("minimum-distance variance needs the projection of p_n");
    }
    return std::sqrt(asymptotic_variance(grad_m(q, proj->h_of_p), q));
}

double min_epsilon_from_distance(double distance, std::int64_t n, double alpha, double sigma)
{
    if (n < 1) {
        throw InvalidArgument("sample size must be at least 1");
    }
    const double radicand =
        distance * distance - normal_quantile(alpha) * sigma / std::sqrt(static_cast<double>(n));
    if (radicand < 0.0) {
        throw InvalidArgument("minimum tolerance undefined: negative radicand (alpha above 1/2?)");
    }
    return std::sqrt(radicand);
}

double min_epsilon(const GenotypeDistribution& p_n, std::int64_t n, double alpha, TestKind kind, double sigma,
                   const ProjectionOptions& proj_opts)
{
    double distance = 0.0;
    if (kind == TestKind::Conditional) {
        distance = l2_distance(p_n, hwe_distribution(allele_distribution(p_n)));
    } else {
        auto proj = project_to_hwe(p_n, proj_opts);
        if (!proj.converged) {
            throw NonConverged("projection onto the HWE family did not converge");
        }
        distance = proj.distance;
    }
    return min_epsilon_from_distance(distance, n, alpha, sigma);
}

TestResult decide(TestKind kind, CalibrationKind calibration, double distance, double sigma, std::int64_t n,
                  double epsilon, double alpha)
{
    validate_test_inputs(n, epsilon, alpha);
    TestResult r;
    r.kind = kind;
    r.calibration = calibration;
    r.n = n;
    r.alpha = alpha;
    r.epsilon = epsilon;
    r.distance = distance;
    r.sigma = sigma;
    r.statistic = std::sqrt(static_cast<double>(n)) * (distance * distance - epsilon * epsilon);
    r.critical_value = normal_quantile(alpha) * sigma;
    r.reject = rejects(r.statistic, r.critical_value, sigma);
    // A negative radicand (alpha > 1/2 only) means every positive tolerance rejects.
    const double radicand = distance * distance - r.critical_value / std::sqrt(static_cast<double>(n));
    r.min_epsilon = radicand > 0.0 ? std::sqrt(radicand) : 0.0;
    return r;
}

TestResult run_asymptotic_test(const GenotypeDistribution& p_n, std::int64_t n, double epsilon, double alpha,
                               TestKind kind, const ProjectionOptions& proj_opts)
{
    validate_test_inputs(n, epsilon, alpha);
    if (kind == TestKind::Conditional) {
        const double distance = l2_distance(p_n, hwe_distribution(allele_distribution(p_n)));
        return decide(kind, CalibrationKind::Asymptotic, distance, asymptotic_sigma(p_n, kind), n, epsilon, alpha);
    }
    const auto proj = project_to_hwe(p_n, proj_opts);
    if (!proj.converged) {
        throw NonConverged("projection onto the HWE family did not converge");
    }
    return decide(kind, CalibrationKind::Asymptotic, proj.distance, asymptotic_sigma(p_n, kind, &proj), n, epsilon,
                  alpha);
}

} // namespace hwe_equiv
