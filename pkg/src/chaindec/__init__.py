"""chaindec: interval-sphere decomposition of filtered chain complexes.

The pipeline: build a filtered chain complex (from a Vietoris-Rips
filtration, an explicit filtration, a boundary file, or a filtered
kernel), decompose it into interval spheres by PAIR/SPLIT row reduction,
and read off the persistence barcode by dropping the zero-length summands.
A column-based standard persistence reduction with clear/compress lives
alongside as an independent cross-check.
"""

from .barcode import Bar, PersistenceDiagram, diagram_from_pairs, diameter_witness, to_barcode
from .boundary import FilteredChainComplexInput, GeneratorLabel, TotalBoundaryMatrix
from .decomposition import (
    Decomposition,
    IntervalSphere,
    PairClassCounts,
    PairProbe,
    SphereSummand,
    SplitPair,
    count_emergent_and_apparent,
    decompose,
    pair,
    pair_probe,
    split,
    split_trivial,
)
from .errors import (
    ChaindecError,
    InternalInvariantError,
    ParseError,
    UsageError,
    ValidationError,
)
from .field import FieldElement, PrimeField, is_prime
from .kernel import (
    KernelGenerator,
    SimplicialMapWithSection,
    chain_map_of,
    decompose_kernel,
    kernel_boundary,
    kernel_generators,
    validate_map,
)
from .rips import (
    FilteredSimplicialComplex,
    Simplex,
    build_rips,
    diameter,
    full_rips_complex,
    point_cloud_distances,
    sort_generators,
    validate_distance_matrix,
)
from .spa import (
    PersistencePair,
    ReductionStats,
    measured_row_iterations,
    predicted_row_iterations,
    spa_reduce,
)

__version__ = "0.1.0"

__all__ = [
    "Bar",
    "ChaindecError",
    "Decomposition",
    "FieldElement",
    "FilteredChainComplexInput",
    "FilteredSimplicialComplex",
    "GeneratorLabel",
    "InternalInvariantError",
    "IntervalSphere",
    "KernelGenerator",
    "PairClassCounts",
    "PairProbe",
    "ParseError",
    "PersistenceDiagram",
    "PersistencePair",
    "PrimeField",
    "ReductionStats",
    "Simplex",
    "SimplicialMapWithSection",
    "SphereSummand",
    "SplitPair",
    "TotalBoundaryMatrix",
    "UsageError",
    "ValidationError",
    "build_rips",
    "chain_map_of",
    "count_emergent_and_apparent",
    "decompose",
    "decompose_kernel",
    "diagram_from_pairs",
    "diameter",
    "diameter_witness",
    "full_rips_complex",
    "is_prime",
    "kernel_boundary",
    "kernel_generators",
    "measured_row_iterations",
    "pair",
    "pair_probe",
    "point_cloud_distances",
    "predicted_row_iterations",
    "sort_generators",
    "spa_reduce",
    "split",
    "split_trivial",
    "to_barcode",
    "validate_distance_matrix",
    "validate_map",
]
