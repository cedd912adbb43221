#include "hwe_equiv/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hwe_equiv/errors.hpp"
#include "hwe_equiv/random.hpp"

namespace hwe_equiv {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kStepFloor = 1e-12;
constexpr double kStationarity = 1e-6;
constexpr int kMaxBacktracks = 60;

// f(a) = || p - hwe(a) ||^2 and its gradient with respect to a.
class Objective {
public:
    Objective(std::span<const double> cells, std::size_t k) : cells_(cells), k_(k), residual_(cells.size()) {}

    double value(std::span<const double> a)
    {
        hwe_cells(a, residual_);
        double sum = 0.0;
        for (std::size_t c = 0; c < residual_.size(); ++c) {
            residual_[c] = cells_[c] - residual_[c];
            sum += residual_[c] * residual_[c];
        }
        return sum;
    }

    // Gradient at the point last passed to value().
    void gradient(std::span<const double> a, std::span<double> grad) const
    {
        std::fill(grad.begin(), grad.end(), 0.0);
        std::size_t c = 0;
        for (std::size_t i = 0; i < k_; ++i) {
            for (std::size_t j = 0; j < i; ++j, ++c) {
                grad[i] -= 4.0 * residual_[c] * a[j];
                grad[j] -= 4.0 * residual_[c] * a[i];
            }
            grad[i] -= 4.0 * residual_[c] * a[i];
            ++c;
        }
    }

private:
    std::span<const double> cells_;
    std::size_t k_;
    std::vector<double> residual_;
};

double max_abs_diff(std::span<const double> x, std::span<const double> y)
{
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        m = std::max(m, std::abs(x[i] - y[i]));
    }
    return m;
}

struct LocalMinimum {
    std::vector<double> alleles;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Projected gradient descent on the simplex. Trial steps use the
// Barzilai-Borwein length; acceptance is by Armijo backtracking along the
// projected direction.
LocalMinimum descend(Objective& f, std::vector<double> a, const ProjectionOptions& opts)
{
    const std::size_t k = a.size();
    std::vector<double> grad(k), trial(k), moved(k), next(k), next_grad(k);

    double value = f.value(a);
    f.gradient(a, grad);
    double step = 1.0;

    LocalMinimum out;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        for (std::size_t i = 0; i < k; ++i) {
            moved[i] = a[i] - step * grad[i];
        }
        trial = project_to_simplex(moved);

        // Stationarity measure: unit-step projected gradient.
        for (std::size_t i = 0; i < k; ++i) {
            moved[i] = a[i] - grad[i];
        }
        const double residual = max_abs_diff(project_to_simplex(moved), a);

        const double step_norm = max_abs_diff(trial, a);
        if (step_norm < kStepFloor || residual < kStepFloor) {
            out.converged = true;
            break;
        }

        double slope = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            slope += grad[i] * (trial[i] - a[i]);
        }
        double lambda = 1.0;
        double next_value = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            for (std::size_t i = 0; i < k; ++i) {
                next[i] = a[i] + lambda * (trial[i] - a[i]);
            }
            next_value = f.value(next);
            if (next_value <= value + kArmijo * lambda * slope) {
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            // No representable decrease left along a descent direction.
            out.converged = residual < kStationarity;
            break;
        }
        f.gradient(next, next_grad);

        double ss = 0.0;
        double sy = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double s = next[i] - a[i];
            ss += s * s;
            sy += s * (next_grad[i] - grad[i]);
        }
        step = sy > 0.0 ? std::clamp(ss / sy, 1e-10, 1e10) : 1.0;

        const double decrease = value - next_value;
        std::swap(a, next);
        std::swap(grad, next_grad);
        value = next_value;
        if (decrease < opts.tolerance && residual < kStationarity) {
            out.converged = true;
            ++it;
            break;
        }
    }
    // value() was last called on a rejected trial point when backtracking failed.
    out.value = f.value(a);
    out.iterations = it;
    out.alleles = std::move(a);
    return out;
}

std::vector<double> clean_alleles(std::vector<double> a)
{
    double total = 0.0;
    for (auto& v : a) {
        v = std::max(v, 0.0);
        total += v;
    }
    for (auto& v : a) {
        v /= total;
    }
    return a;
}

} // namespace

void ProjectionOptions::validate() const
{
    if (!(tolerance > 0.0)) {
        throw InvalidArgument("projection tolerance must be positive");
    }
    if (max_iterations < 1) {
        throw InvalidArgument("projection max_iterations must be at least 1");
    }
    if (restarts < 0) {
        throw InvalidArgument("projection restarts must be non-negative");
    }
}

std::vector<double> project_to_simplex(std::span<const double> v)
{
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cumulative += sorted[i];
        const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (sorted[i] - t > 0.0) {
            theta = t;
        }
    }
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::max(v[i] - theta, 0.0);
    }
    return out;
}

ProjectionResult project_to_hwe(const GenotypeDistribution& p, const ProjectionOptions& opts)
{
    opts.validate();
    const std::size_t k = p.k();
    Objective f(p.probs(), k);

    Rng rng = make_rng(opts.seed, {0x70726f6aULL, k});
    std::vector<double> restart_distances;
    LocalMinimum best;
    best.value = std::numeric_limits<double>::infinity();
    int total_iterations = 0;
    for (int r = 0; r <= opts.restarts; ++r) {
        auto start = r == 0 ? clean_alleles(allele_frequencies(p.probs(), k)) : flat_dirichlet(k, rng);
        auto local = descend(f, std::move(start), opts);
        total_iterations += local.iterations;
        restart_distances.push_back(std::sqrt(local.value));
        if (local.value < best.value) {
            best = std::move(local);
        }
    }

    AlleleDistribution alleles(clean_alleles(std::move(best.alleles)));
    GenotypeDistribution h = hwe_distribution(alleles);
    const double distance = l2_distance(p, h);
    return ProjectionResult{std::move(alleles), std::move(h), distance, best.converged, total_iterations,
                            std::move(restart_distances)};
}

FastProjection min_distance_squared(std::span<const double> cells, std::size_t k, const ProjectionOptions& opts)
{
    Objective f(cells, k);
    auto local = descend(f, clean_alleles(allele_frequencies(cells, k)), opts);
    return {local.value, local.converged};
}

double grid_oracle_biallelic(const GenotypeDistribution& p, std::size_t grid_size)
{
    if (p.k() != 2) {
        throw InvalidArgument("grid oracle requires exactly two alleles");
    }
    if (grid_size < 2) {
        throw InvalidArgument("grid oracle needs at least two intervals");
    }
    auto dist2 = [&](double a1) {
        const double a2 = 1.0 - a1;
        const double d0 = p(0, 0) - a1 * a1;
        const double d1 = p(1, 0) - 2.0 * a1 * a2;
        const double d2 = p(1, 1) - a2 * a2;
        return d0 * d0 + d1 * d1 + d2 * d2;
    };
    const double g = static_cast<double>(grid_size);
    std::size_t best = 0;
    double best_value = dist2(0.0);
    for (std::size_t i = 1; i <= grid_size; ++i) {
        const double v = dist2(static_cast<double>(i) / g);
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    double lo = std::max(0.0, (static_cast<double>(best) - 1.0) / g);
    double hi = std::min(1.0, (static_cast<double>(best) + 1.0) / g);
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (dist2(m1) < dist2(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    return std::sqrt(std::min(best_value, dist2(0.5 * (lo + hi))));
}

} // namespace hwe_equiv
