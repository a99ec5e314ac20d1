"""Interval-sphere decomposition of filtered chain complexes.

A pair of generators (row i, column j) satisfying the three split
conditions

    SC1:  d[i][j] != 0
    SC2:  i has maximal entrance among the nonzero rows of column j
    SC3:  j has minimal entrance among the nonzero columns of row i

spans an interval sphere that can be pruned off the complex: one row
Gaussian pass clears column j, after which rows i, j and columns i, j are
dropped and the summand I^n[s, e] is emitted with n = degree(i),
s = entrance(i), e = entrance(j).  Generators left once the differential is
exhausted contribute never-capped summands I^n[s, inf).  The resulting
multiset is independent of the generator order and of the row-selection
policy, which is what the order-invariance tests pin down.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field as dataclass_field

from .boundary import FilteredChainComplexInput, GeneratorLabel, TotalBoundaryMatrix
from .errors import InternalInvariantError, UsageError
from .field import PrimeField

STRATEGIES = ("entrance", "as-given")


@dataclass(frozen=True, order=True)
class IntervalSphere:
    """An n-sphere entering at ``birth`` and capped by a disk at ``death``.

    ``death == math.inf`` means the sphere is never capped.  ``birth ==
    death`` is legal and meaningful: such summands are invisible to
    homology but are first-class outputs here.
    """

    dimension: int
    birth: float
    death: float

    def __post_init__(self):
        if self.dimension < 0:
            raise UsageError(f"sphere dimension must be >= 0: {self.dimension}")
        if not (0 <= self.birth < math.inf):
            raise UsageError(f"sphere birth must be finite and >= 0: {self.birth}")
        if self.death < self.birth:
            raise UsageError(f"sphere dies at {self.death} before its birth {self.birth}")

    @property
    def is_infinite(self) -> bool:
        return self.death == math.inf

    @property
    def is_zero_length(self) -> bool:
        return self.death == self.birth


@dataclass(frozen=True)
class SplitPair:
    """Row and column index of a pair satisfying SC1-2-3."""

    row: int
    col: int


@dataclass(frozen=True)
class PairProbe:
    """Outcome of one PAIR search, with enough detail to classify it.

    ``updates`` counts i/j reassignments before the exit; ``exit_test`` is
    "facet" when the search returned at the youngest-facet membership test
    and "cofacet" when it returned at the oldest-cofacet membership test.
    The entrance paths are strictly monotone by construction (increasing
    along rows, decreasing along columns); pair() enforces that.
    """

    pair: SplitPair
    start_row: int
    updates: int
    exit_test: str
    row_entrances: tuple[float, ...]
    col_entrances: tuple[float, ...]


@dataclass(frozen=True)
class SplitEvent:
    probe: PairProbe
    prior_splits: int
    row_ops: tuple[tuple[int, int, int], ...]  # (target, source, scalar)


@dataclass
class DecompositionTrace:
    events: list[SplitEvent] = dataclass_field(default_factory=list)


@dataclass(frozen=True)
class SphereSummand:
    sphere: IntervalSphere
    birth_index: int
    death_index: int | None  # None for never-capped summands


@dataclass(frozen=True)
class Decomposition:
    summands: tuple[SphereSummand, ...]
    generator_count: int
    labels: tuple[GeneratorLabel, ...]
    trace: DecompositionTrace | None = None

    @property
    def spheres(self) -> list[IntervalSphere]:
        return [s.sphere for s in self.summands]

    def multiset(self) -> Counter:
        return Counter(self.spheres)

    def finite_count(self) -> int:
        return sum(1 for s in self.summands if not s.sphere.is_infinite)

    def infinite_count(self) -> int:
        return sum(1 for s in self.summands if s.sphere.is_infinite)

    def pairing(self) -> dict[tuple[int, int | None], IntervalSphere]:
        return {(s.birth_index, s.death_index): s.sphere for s in self.summands}


def _argmin_entrance_of_row(matrix: TotalBoundaryMatrix, row: int) -> int:
    """Nonzero column of ``row`` with the smallest entrance, ties to low index."""
    return min(
        (col for col, _ in matrix.row_items(row)),
        key=lambda col: (matrix.label(col).entrance, col),
    )


def _argmax_entrance_of_col(matrix: TotalBoundaryMatrix, col: int) -> int:
    """Nonzero row of ``col`` with the greatest entrance, ties to low index."""
    return min(
        (row for row, _ in matrix.col_items(col)),
        key=lambda row: (-matrix.label(row).entrance, row),
    )


def pair_probe(matrix: TotalBoundaryMatrix, row: int) -> PairProbe:
    """Run the PAIR search from a nonzero row, recording its path.

    Starting from j = the earliest-entrance nonzero column of the row, the
    loop alternates two membership tests: does i have maximal entrance in
    column j (else move i there), then does j have minimal entrance in row
    i (else move j there).  Every i move strictly increases entrance(i) and
    every j move strictly decreases entrance(j), so the search terminates;
    both monotonicity facts are asserted.
    """
    if matrix.row_is_zero(row):
        raise UsageError(f"row {row} is zero; PAIR needs a nonzero row")
    i = row
    j = _argmin_entrance_of_row(matrix, i)
    row_path = [matrix.label(i).entrance]
    col_path = [matrix.label(j).entrance]
    updates = 0
    while True:
        best_row = _argmax_entrance_of_col(matrix, j)
        if matrix.label(i).entrance == matrix.label(best_row).entrance:
            exit_test = "facet"
            break
        if matrix.label(best_row).entrance <= matrix.label(i).entrance:
            raise InternalInvariantError("row entrance failed to strictly increase in PAIR")
        i = best_row
        updates += 1
        row_path.append(matrix.label(i).entrance)
        best_col = _argmin_entrance_of_row(matrix, i)
        if matrix.label(j).entrance == matrix.label(best_col).entrance:
            exit_test = "cofacet"
            break
        if matrix.label(best_col).entrance >= matrix.label(j).entrance:
            raise InternalInvariantError("column entrance failed to strictly decrease in PAIR")
        j = best_col
        updates += 1
        col_path.append(matrix.label(j).entrance)
    return PairProbe(
        pair=SplitPair(i, j),
        start_row=row,
        updates=updates,
        exit_test=exit_test,
        row_entrances=tuple(row_path),
        col_entrances=tuple(col_path),
    )


def pair(matrix: TotalBoundaryMatrix, row: int) -> SplitPair:
    """PAIR: from a nonzero row, locate a pair satisfying SC1-2-3."""
    return pair_probe(matrix, row).pair


def check_split_conditions(matrix: TotalBoundaryMatrix, candidate: SplitPair) -> None:
    """Raise UsageError unless the pair satisfies SC1-2-3 on this matrix."""
    i, j = candidate.row, candidate.col
    if matrix.entry(i, j) == 0:
        raise UsageError(f"SC1 fails: entry ({i}, {j}) is zero")
    col_max = max(matrix.label(r).entrance for r, _ in matrix.col_items(j))
    if matrix.label(i).entrance != col_max:
        raise UsageError(f"SC2 fails: row {i} is not entrance-maximal in column {j}")
    row_min = min(matrix.label(c).entrance for c, _ in matrix.row_items(i))
    if matrix.label(j).entrance != row_min:
        raise UsageError(f"SC3 fails: column {j} is not entrance-minimal in row {i}")


def split(
    matrix: TotalBoundaryMatrix,
    split_pair: SplitPair,
    row_ops: list[tuple[int, int, int]] | None = None,
) -> IntervalSphere:
    """SPLIT: prune the interval sphere spanned by an SC1-2-3 pair.

    Adds to every other row k meeting column j the row i scaled by
    -d[i][j]^(-1) * d[k][j] (which clears column j except the pivot), then
    removes rows i, j and columns i, j.  Only row operations are performed;
    the column-side change of generators exists on paper but never needs to
    be materialized to recover the boundary of the smaller complex.  The
    matrix shrinks in place by two generators.
    """
    i, j = split_pair.row, split_pair.col
    check_split_conditions(matrix, split_pair)
    # d*d = 0 on column j is exactly what forces the replaced generator's
    # boundary (the "new column i") to vanish; verify before touching rows.
    square = matrix.boundary_of_column_squared(j)
    if square:
        raise InternalInvariantError(
            f"column {j} of d*d is nonzero at rows {sorted(square)} before split"
        )
    pivot = matrix.entry(i, j)
    neg_pivot_inv = matrix.field.neg(matrix.field.inv(pivot))
    for k, value in sorted(matrix.col_items(j)):
        if k == i:
            continue
        scalar = matrix.field.mul(neg_pivot_inv, value)
        matrix.add_scaled_row(k, i, scalar)
        if row_ops is not None:
            row_ops.append((k, i, scalar))
    matrix.delete_generator_pair(i, j)
    return IntervalSphere(
        dimension=matrix.labels[i].degree,
        birth=matrix.labels[i].entrance,
        death=matrix.labels[j].entrance,
    )


def split_trivial(matrix: TotalBoundaryMatrix, index: int) -> IntervalSphere:
    """Prune a generator whose row and column both vanish: a never-capped sphere."""
    label = matrix.label(index)
    matrix.delete_generator(index)
    return IntervalSphere(dimension=label.degree, birth=label.entrance, death=math.inf)


def decompose(
    complex_input: FilteredChainComplexInput,
    field: PrimeField,
    strategy: str = "entrance",
    trace: bool = False,
) -> Decomposition:
    """Full decomposition into the unique multiset of interval spheres.

    ``strategy`` picks which nonzero row seeds each PAIR call: "entrance"
    scans in (entrance, degree, index) order and restarts from the earliest
    surviving nonzero row after every split; "as-given" scans in raw index
    order.  The output multiset does not depend on the choice.
    """
    if strategy not in STRATEGIES:
        raise UsageError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    matrix = TotalBoundaryMatrix.build(complex_input, field)
    m = len(complex_input)
    if strategy == "entrance":
        scan = sorted(
            range(m),
            key=lambda g: (matrix.label(g).entrance, matrix.label(g).degree, g),
        )
    else:
        scan = list(range(m))
    trace_log = DecompositionTrace() if trace else None
    summands: list[SphereSummand] = []
    splits = 0
    while True:
        start = next(
            (g for g in scan if matrix.is_alive(g) and not matrix.row_is_zero(g)), None
        )
        if start is None:
            break
        probe = pair_probe(matrix, start)
        ops: list[tuple[int, int, int]] | None = [] if trace else None
        sphere = split(matrix, probe.pair, row_ops=ops)
        summands.append(SphereSummand(sphere, probe.pair.row, probe.pair.col))
        if trace_log is not None:
            trace_log.events.append(
                SplitEvent(probe=probe, prior_splits=splits, row_ops=tuple(ops or ()))
            )
        splits += 1
    for g in matrix.alive():
        summands.append(SphereSummand(split_trivial(matrix, g), g, None))
    finite = sum(1 for s in summands if not s.sphere.is_infinite)
    infinite = len(summands) - finite
    if 2 * finite + infinite != m:
        raise InternalInvariantError(
            f"summand count mismatch: 2*{finite} + {infinite} != {m} generators"
        )
    return Decomposition(
        summands=tuple(summands),
        generator_count=m,
        labels=complex_input.labels,
        trace=trace_log,
    )


@dataclass(frozen=True)
class PairClassCounts:
    apparent: int
    emergent_facet: int
    emergent_cofacet: int


def count_emergent_and_apparent(decomposition: Decomposition) -> PairClassCounts:
    """Classify traced splits into apparent and emergent pairs.

    Requires a traced run whose generators were ordered by entrance, then
    degree.  A split is apparent when PAIR returned at the first facet test
    with no i/j updates before any split had been performed; with at least
    one prior split the same immediate exits are emergent, facet or cofacet
    according to which membership test succeeded first.
    """
    if decomposition.trace is None:
        raise UsageError("decomposition was run without tracing")
    keys = [(label.entrance, label.degree) for label in decomposition.labels]
    if any(a > b for a, b in zip(keys, keys[1:])):
        raise UsageError("pair classification requires (entrance, degree) generator order")
    apparent = emergent_facet = emergent_cofacet = 0
    for event in decomposition.trace.events:
        immediate_facet = event.probe.updates == 0 and event.probe.exit_test == "facet"
        immediate_cofacet = event.probe.updates == 1 and event.probe.exit_test == "cofacet"
        if event.prior_splits == 0:
            apparent += 1 if immediate_facet else 0
        elif immediate_facet:
            emergent_facet += 1
        elif immediate_cofacet:
            emergent_cofacet += 1
    return PairClassCounts(apparent, emergent_facet, emergent_cofacet)
