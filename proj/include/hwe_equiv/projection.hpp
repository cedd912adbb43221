#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hwe_equiv/genotype.hpp"

namespace hwe_equiv {

struct ProjectionOptions {
    double tolerance = 1e-10;   // stop once the objective decreases by less than this
    int max_iterations = 10000; // per start
    int restarts = 5;           // random starts in addition to the allele-frequency start
    std::uint64_t seed = 0;     // stream for the random starts

    void validate() const;
};

/// Closest HWE distribution to p in Euclidean distance.
///
/// `h_of_p` is hwe_distribution(argmin_alleles) and `distance` is
/// l2_distance(p, h_of_p). `restart_distances` holds the local optimum found
/// from each start, the allele-frequency start first.
struct ProjectionResult {
    AlleleDistribution argmin_alleles;
    GenotypeDistribution h_of_p;
    double distance = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> restart_distances;
};

ProjectionResult project_to_hwe(const GenotypeDistribution& p, const ProjectionOptions& opts = {});

// Squared minimum distance only, from a single start at a(p). Used on the hot
// path of the bootstrap and the simulations. Returns false in `converged` when
// the iteration budget ran out.
struct FastProjection {
    double distance_squared = 0.0;
    bool converged = false;
};
FastProjection min_distance_squared(std::span<const double> cells, std::size_t k, const ProjectionOptions& opts = {});

// Euclidean projection of v onto the probability simplex.
std::vector<double> project_to_simplex(std::span<const double> v);

/// Brute-force reference for k = 2: scans a1 over a uniform grid of
/// `grid_size` intervals, then refines around the best node with ternary search.
double grid_oracle_biallelic(const GenotypeDistribution& p, std::size_t grid_size);

} // namespace hwe_equiv
