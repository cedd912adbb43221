#include "hwe_equiv/genotype.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hwe_equiv/errors.hpp"

namespace hwe_equiv {

namespace {

void check_simplex(std::span<const double> values, const char* what)
{
    double total = 0.0;
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw InvalidArgument(std::string(what) + ": entry outside [0,1]");
        }
        total += v;
    }
    if (std::abs(total - 1.0) > kSimplexTolerance) {
        throw InvalidArgument(std::string(what) + ": entries do not sum to 1");
    }
}

} // namespace

std::size_t allele_count_for_cells(std::size_t m)
{
    auto k = static_cast<std::size_t>((std::sqrt(8.0 * static_cast<double>(m) + 1.0) - 1.0) / 2.0);
    while (genotype_cell_count(k) < m) {
        ++k;
    }
    if (k == 0 || genotype_cell_count(k) != m) {
        throw InvalidArgument("length " + std::to_string(m) + " is not a triangular number k(k+1)/2");
    }
    return k;
}

GenotypeCounts::GenotypeCounts(std::size_t k, std::vector<std::int64_t> cells)
    : k_(k), cells_(std::move(cells)), n_(0)
{
    if (k_ < 2) {
        throw InvalidArgument("at least two alleles are required");
    }
    if (cells_.size() != genotype_cell_count(k_)) {
        throw DimensionMismatch("expected " + std::to_string(genotype_cell_count(k_)) + " genotype cells, got " +
                                std::to_string(cells_.size()));
    }
    for (auto c : cells_) {
        if (c < 0) {
            throw InvalidArgument("genotype counts must be non-negative");
        }
        n_ += c;
    }
}

GenotypeDistribution::GenotypeDistribution(std::size_t k, std::vector<double> probs)
    : k_(k), probs_(std::move(probs))
{
    if (k_ < 1) {
        throw InvalidArgument("allele count must be positive");
    }
    if (probs_.size() != genotype_cell_count(k_)) {
        throw DimensionMismatch("expected " + std::to_string(genotype_cell_count(k_)) + " genotype cells, got " +
                                std::to_string(probs_.size()));
    }
    check_simplex(probs_, "genotype distribution");
}

AlleleDistribution::AlleleDistribution(std::vector<double> freqs) : freqs_(std::move(freqs))
{
    if (freqs_.empty()) {
        throw InvalidArgument("allele distribution is empty");
    }
    check_simplex(freqs_, "allele distribution");
}

GenotypeVector::GenotypeVector(std::vector<double> entries)
    : entries_(std::move(entries)), k_(allele_count_for_cells(entries_.size()))
{
}

GenotypeDistribution from_counts(const GenotypeCounts& counts)
{
    if (counts.n() == 0) {
        throw EmptySample();
    }
    const auto n = static_cast<double>(counts.n());
    std::vector<double> probs;
    probs.reserve(counts.cells().size());
    for (auto c : counts.cells()) {
        probs.push_back(static_cast<double>(c) / n);
    }
    return {counts.k(), std::move(probs)};
}

std::vector<double> allele_frequencies(std::span<const double> cells, std::size_t k)
{
    std::vector<double> a(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const double* row = cells.data() + i * (i + 1) / 2;
        for (std::size_t j = 0; j < i; ++j) {
            a[i] += 0.5 * row[j];
            a[j] += 0.5 * row[j];
        }
        a[i] += row[i];
    }
    return a;
}

AlleleDistribution allele_distribution(const GenotypeDistribution& p)
{
    auto a = allele_frequencies(p.probs(), p.k());
    // Clamp rounding residue so the simplex check holds for boundary alleles.
    for (double& v : a) {
        v = std::clamp(v, 0.0, 1.0);
    }
    return AlleleDistribution(std::move(a));
}

void hwe_cells(std::span<const double> a, std::span<double> out)
{
    const std::size_t k = a.size();
    std::size_t c = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            out[c++] = 2.0 * a[i] * a[j];
        }
        out[c++] = a[i] * a[i];
    }
}

GenotypeDistribution hwe_distribution(const AlleleDistribution& a)
{
    std::vector<double> e(genotype_cell_count(a.k()));
    hwe_cells(a.freqs(), e);
    return {a.k(), std::move(e)};
}

double l2_distance(const GenotypeDistribution& p, const GenotypeDistribution& q)
{
    if (p.k() != q.k()) {
        throw DimensionMismatch("distributions have different allele counts");
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        const double diff = p.probs()[c] - q.probs()[c];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

double conditional_distance_squared(std::span<const double> cells, std::size_t k)
{
    const auto a = allele_frequencies(cells, k);
    double sum = 0.0;
    std::size_t c = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j, ++c) {
            const double e = i == j ? a[i] * a[i] : 2.0 * a[i] * a[j];
            const double diff = cells[c] - e;
            sum += diff * diff;
        }
    }
    return sum;
}

GenotypeVector vectorize(const GenotypeDistribution& p)
{
    return GenotypeVector({p.probs().begin(), p.probs().end()});
}

GenotypeDistribution unvectorize(const GenotypeVector& q)
{
    return {q.k(), {q.entries().begin(), q.entries().end()}};
}

CovarianceMatrix multinomial_covariance(const GenotypeVector& q)
{
    return multinomial_covariance(q.entries());
}

CovarianceMatrix multinomial_covariance(std::span<const double> q)
{
    const std::size_t m = q.size();
    CovarianceMatrix sigma{m, std::vector<double>(m * m)};
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            sigma.values[r * m + c] = (r == c ? q[r] : 0.0) - q[r] * q[c];
        }
    }
    return sigma;
}

} // namespace hwe_equiv
