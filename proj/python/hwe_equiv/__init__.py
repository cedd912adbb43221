"""Equivalence tests for Hardy-Weinberg equilibrium at multi-allelic loci.

Counts are lists of rows of the lower-triangular genotype table: row i holds
the i + 1 counts of genotypes (i, 0) ... (i, i).
"""

from ._core import (
    HweError,
    TestResult,
    allele_frequencies,
    boundary_study,
    builtin_dataset,
    distances,
    parse_dataset,
    power_grid,
    rng_algorithm,
    run_test,
)

__all__ = [
    "HweError",
    "TestResult",
    "allele_frequencies",
    "boundary_study",
    "builtin_dataset",
    "distances",
    "parse_dataset",
    "power_grid",
    "rng_algorithm",
    "run_test",
]
