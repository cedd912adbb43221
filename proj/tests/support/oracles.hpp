#pragma once

// Reference computations for the unit and acceptance tests. Nothing here calls
// into the library's sampling or optimization code paths.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace hwe_equiv::oracle {

// Flat Dirichlet draw via gamma variates from the standard library.
inline std::vector<double> random_simplex(std::size_t dim, std::mt19937_64& gen, double floor = 0.0)
{
    std::gamma_distribution<double> gamma(1.0, 1.0);
    std::vector<double> v(dim);
    double total = 0.0;
    for (auto& x : v) {
        x = gamma(gen) + floor;
        total += x;
    }
    for (auto& x : v) {
        x /= total;
    }
    // Push rounding residue into the largest entry so the sum is 1 to ~1 ulp.
    double sum = 0.0;
    std::size_t largest = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        sum += v[i];
        if (v[i] > v[largest]) {
            largest = i;
        }
    }
    v[largest] += 1.0 - sum;
    return v;
}

// Conditional squared distance computed directly from the textbook formulas:
// a(i) = (1/2) sum_j (p(i,j) + p(j,i)) on the full symmetric-storage matrix.
inline double reference_conditional_distance_squared(const std::vector<double>& cells, std::size_t k)
{
    std::vector<std::vector<double>> full(k, std::vector<double>(k, 0.0));
    std::size_t c = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            full[i][j] = cells[c++];
        }
    }
    std::vector<double> a(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            a[i] += 0.5 * (full[i][j] + full[j][i]);
        }
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double e = i == j ? a[i] * a[i] : 2.0 * a[i] * a[j];
            sum += (full[i][j] - e) * (full[i][j] - e);
        }
    }
    return sum;
}

inline std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                              const std::vector<double>& x, double h)
{
    std::vector<double> grad(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto plus = x;
        auto minus = x;
        plus[i] += h;
        minus[i] -= h;
        grad[i] = (f(plus) - f(minus)) / (2.0 * h);
    }
    return grad;
}

// Sample covariance of X / sqrt(trials) for X ~ multinomial(trials, q), drawn
// with std::binomial_distribution. Estimates D_q - q q'.
inline std::vector<double> sampled_multinomial_covariance(const std::vector<double>& q, int trials, int draws,
                                                          std::mt19937_64& gen)
{
    const std::size_t m = q.size();
    std::vector<double> sum(m, 0.0);
    std::vector<double> cross(m * m, 0.0);
    std::vector<double> x(m);
    for (int d = 0; d < draws; ++d) {
        int remaining = trials;
        double mass = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (i + 1 == m || mass <= 0.0) {
                x[i] = remaining;
                remaining = 0;
                continue;
            }
            const double p = std::min(1.0, std::max(0.0, q[i] / mass));
            std::binomial_distribution<int> draw(remaining, p);
            const int xi = remaining > 0 ? draw(gen) : 0;
            x[i] = xi;
            remaining -= xi;
            mass -= q[i];
        }
        for (std::size_t i = 0; i < m; ++i) {
            sum[i] += x[i];
            for (std::size_t j = 0; j < m; ++j) {
                cross[i * m + j] += x[i] * x[j];
            }
        }
    }
    std::vector<double> cov(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double c = (cross[i * m + j] - sum[i] * sum[j] / draws) / (draws - 1);
            cov[i * m + j] = c / trials;
        }
    }
    return cov;
}

// Sample variance of g'X over categorical draws X ~ multinomial(1, q).
inline double sampled_linear_variance(const std::vector<double>& g, const std::vector<double>& q, int draws,
                                      std::mt19937_64& gen)
{
    std::discrete_distribution<std::size_t> pick(q.begin(), q.end());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int d = 0; d < draws; ++d) {
        const double v = g[pick(gen)];
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / draws;
    return (sum_sq - draws * mean * mean) / (draws - 1);
}

// Rejection rate of the asymptotic conditional test at `target`, computed
// without the library: std::binomial_distribution sampling, a finite-difference
// gradient of the reference distance and a dense covariance sandwich.
inline double reference_conditional_power(const std::vector<double>& target, std::size_t k, int n, double epsilon,
                                          int reps, std::mt19937_64& gen)
{
    constexpr double c_alpha = -1.6448536269514722; // 5% normal quantile
    const std::size_t m = target.size();
    const auto f = [k](const std::vector<double>& x) { return reference_conditional_distance_squared(x, k); };
    int rejections = 0;
    std::vector<double> q(m);
    for (int r = 0; r < reps; ++r) {
        int remaining = n;
        double mass = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            int xi = remaining;
            if (i + 1 < m && remaining > 0 && mass > 0.0) {
                std::binomial_distribution<int> draw(remaining, std::min(1.0, std::max(0.0, target[i] / mass)));
                xi = draw(gen);
            }
            q[i] = static_cast<double>(xi) / n;
            remaining -= xi;
            mass -= target[i];
        }
        const auto g = central_difference(f, q, 1e-7);
        double mean = 0.0;
        double second = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            mean += q[i] * g[i];
            second += q[i] * g[i] * g[i];
        }
        const double sigma = std::sqrt(std::max(0.0, second - mean * mean));
        const double t = std::sqrt(static_cast<double>(n)) * (f(q) - epsilon * epsilon);
        if (sigma > 0.0 ? t <= c_alpha * sigma : t < 0.0) {
            ++rejections;
        }
    }
    return static_cast<double>(rejections) / reps;
}

} // namespace hwe_equiv::oracle
