#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hwe_equiv {

// Genotype cells are stored as the lower triangle of a k x k matrix in
// row-major order: (0,0), (1,0), (1,1), (2,0), ..., (k-1,k-1). Indices are
// zero-based throughout the library.
constexpr std::size_t genotype_cell_count(std::size_t k) noexcept { return k * (k + 1) / 2; }

constexpr std::size_t cell_index(std::size_t i, std::size_t j) noexcept
{
    return i >= j ? i * (i + 1) / 2 + j : j * (j + 1) / 2 + i;
}

// Inverse of genotype_cell_count; throws InvalidArgument when m is not a
// triangular number with k >= 1.
std::size_t allele_count_for_cells(std::size_t m);

// Tolerance used when validating that a probability vector lies on the simplex.
inline constexpr double kSimplexTolerance = 1e-12;

/// Observed genotype counts of n diploid individuals at a k-allele locus.
class GenotypeCounts {
public:
    GenotypeCounts(std::size_t k, std::vector<std::int64_t> cells);

    std::size_t k() const noexcept { return k_; }
    std::int64_t n() const noexcept { return n_; }
    std::int64_t operator()(std::size_t i, std::size_t j) const { return cells_[cell_index(i, j)]; }
    std::span<const std::int64_t> cells() const noexcept { return cells_; }

    friend bool operator==(const GenotypeCounts&, const GenotypeCounts&) = default;

private:
    std::size_t k_;
    std::vector<std::int64_t> cells_;
    std::int64_t n_;
};

/// Probability distribution over the k(k+1)/2 unordered genotypes.
class GenotypeDistribution {
public:
    GenotypeDistribution(std::size_t k, std::vector<double> probs);

    std::size_t k() const noexcept { return k_; }
    std::size_t size() const noexcept { return probs_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return probs_[cell_index(i, j)]; }
    std::span<const double> probs() const noexcept { return probs_; }

    friend bool operator==(const GenotypeDistribution&, const GenotypeDistribution&) = default;

private:
    std::size_t k_;
    std::vector<double> probs_;
};

class AlleleDistribution {
public:
    explicit AlleleDistribution(std::vector<double> freqs);

    std::size_t k() const noexcept { return freqs_.size(); }
    double operator[](std::size_t i) const { return freqs_[i]; }
    std::span<const double> freqs() const noexcept { return freqs_; }

private:
    std::vector<double> freqs_;
};

// Flat image of a genotype matrix. Not restricted to the simplex: gradients
// and perturbed points share this representation.
class GenotypeVector {
public:
    explicit GenotypeVector(std::vector<double> entries);

    std::size_t size() const noexcept { return entries_.size(); }
    std::size_t k() const noexcept { return k_; }
    double operator[](std::size_t c) const { return entries_[c]; }
    std::span<const double> entries() const noexcept { return entries_; }

    friend bool operator==(const GenotypeVector&, const GenotypeVector&) = default;

private:
    std::vector<double> entries_;
    std::size_t k_;
};

/// Symmetric m x m matrix stored densely in row-major order.
struct CovarianceMatrix {
    std::size_t dim = 0;
    std::vector<double> values;

    double operator()(std::size_t r, std::size_t c) const { return values[r * dim + c]; }
};

GenotypeDistribution from_counts(const GenotypeCounts& counts);

AlleleDistribution allele_distribution(const GenotypeDistribution& p);

// Allele frequencies of an arbitrary cell vector (no simplex requirement).
std::vector<double> allele_frequencies(std::span<const double> cells, std::size_t k);

GenotypeDistribution hwe_distribution(const AlleleDistribution& a);

// Genotype probabilities a(i)^2 and 2 a(i) a(j) written into `out`, for any
// real vector a. `out` must have room for k(k+1)/2 cells.
void hwe_cells(std::span<const double> a, std::span<double> out);

double l2_distance(const GenotypeDistribution& p, const GenotypeDistribution& q);

// Squared Euclidean distance between p and its HWE counterpart e(p).
double conditional_distance_squared(std::span<const double> cells, std::size_t k);

GenotypeVector vectorize(const GenotypeDistribution& p);
GenotypeDistribution unvectorize(const GenotypeVector& q);

// D_q - q q' for any probability vector q (not only genotype vectors).
CovarianceMatrix multinomial_covariance(std::span<const double> q);
CovarianceMatrix multinomial_covariance(const GenotypeVector& q);

} // namespace hwe_equiv
