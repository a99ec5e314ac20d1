"""Standard persistence algorithm with clear and compress, plus iteration counts.

This module is the cross-validation side of the package: a column-based
left-to-right reduction over its own sparse store, sharing nothing with the
row-based sphere decomposition so the two cannot inherit one another's
bugs.  It also measures and predicts how many row visits the decomposition
needs on full Vietoris-Rips complexes, with and without skipping rows known
to belong to negative generators.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .boundary import FilteredChainComplexInput, TotalBoundaryMatrix
from .decomposition import pair_probe, split
from .errors import InternalInvariantError, UsageError, ValidationError
from .field import PrimeField

MODES = ("plain", "clear", "compress")


@dataclass(frozen=True)
class PersistencePair:
    """Positive generator i paired with the negative generator j killing it.

    ``death_index`` is None for essential classes, which never acquire a
    pivot.
    """

    birth_index: int
    death_index: int | None


@dataclass
class ReductionStats:
    """Workload counters.

    rows_processed: generator columns actually reduced (clear-skipped ones
    are excluded and show up under ``cleared`` instead).
    column_additions: column += scalar * column events.
    cleared: columns zeroed without reduction because their index was
    already known positive.
    compressed: rows zeroed because their index was already known negative.
    """

    rows_processed: int = 0
    column_additions: int = 0
    cleared: int = 0
    compressed: int = 0


def _require_spa_order(complex_input: FilteredChainComplexInput) -> None:
    keys = [(label.entrance, label.degree) for label in complex_input.labels]
    if any(a > b for a, b in zip(keys, keys[1:])):
        raise UsageError("spa_reduce requires generators sorted by (entrance, degree)")


def _tie_shuffled(complex_input: FilteredChainComplexInput, seed: int) -> list[int]:
    """Permutation that reshuffles only the (entrance, degree) tie groups."""
    rng = random.Random(seed)
    m = len(complex_input)
    jitter = [rng.random() for _ in range(m)]
    return sorted(
        range(m),
        key=lambda g: (
            complex_input.labels[g].entrance,
            complex_input.labels[g].degree,
            jitter[g],
        ),
    )


def spa_reduce(
    complex_input: FilteredChainComplexInput,
    field: PrimeField,
    mode: str = "plain",
    seed: int | None = None,
) -> tuple[list[PersistencePair], ReductionStats]:
    """Left-to-right column reduction; returns pivot pairs and essentials.

    The matrix is reduced until no two nonzero columns share a pivot (the
    lowest nonzero row of a column).  ``clear`` zeroes the column of every
    index identified as positive, walking degree blocks downward;
    ``compress`` zeroes the row of every index identified as negative,
    walking degree blocks upward.  All three modes return the same pairs.
    ``seed`` randomizes the order inside (entrance, degree) tie groups.
    """
    if mode not in MODES:
        raise UsageError(f"unknown mode {mode!r}; expected one of {MODES}")
    _require_spa_order(complex_input)
    if seed is not None:
        order = _tie_shuffled(complex_input, seed)
        shuffled = complex_input.permuted(order)
        pairs, stats = spa_reduce(shuffled, field, mode=mode, seed=None)
        return (
            [
                PersistencePair(
                    order[p.birth_index],
                    None if p.death_index is None else order[p.death_index],
                )
                for p in pairs
            ],
            stats,
        )

    m = len(complex_input)
    labels = complex_input.labels
    columns: list[dict[int, int]] = []
    for j, column in enumerate(complex_input.columns):
        col: dict[int, int] = {}
        for i, raw in column:
            if not (0 <= i < m):
                raise ValidationError(f"column {j}: row index {i} out of range")
            coeff = field.normalize(raw)
            if coeff == 0:
                raise ValidationError(f"entry ({i}, {j}) vanishes mod {field.p}")
            col[i] = coeff
        columns.append(col)

    stats = ReductionStats()
    pivot_owner: dict[int, int] = {}  # pivot row -> column that claimed it

    def reduce_column(j: int) -> int | None:
        """Reduce column j against earlier claimed columns; return its pivot."""
        col = columns[j]
        while col:
            piv = max(col)
            owner = pivot_owner.get(piv)
            if owner is None:
                pivot_owner[piv] = j
                return piv
            factor = field.mul(col[piv], field.inv(columns[owner][piv]))
            for r, v in columns[owner].items():
                updated = (col.get(r, 0) - factor * v) % field.p
                if updated:
                    col[r] = updated
                else:
                    col.pop(r, None)
            stats.column_additions += 1
        return None

    degrees = sorted({label.degree for label in labels})
    if mode == "plain":
        schedule = [list(range(m))]
    elif mode == "clear":
        schedule = [
            [j for j in range(m) if labels[j].degree == n] for n in reversed(degrees)
        ]
    else:
        schedule = [[j for j in range(m) if labels[j].degree == n] for n in degrees]

    cleared: set[int] = set()
    dead_rows: set[int] = set()
    pairs: list[PersistencePair] = []
    negatives: set[int] = set()
    for block in schedule:
        for j in block:
            if mode == "clear" and j in cleared:
                columns[j].clear()
                stats.cleared += 1
                continue
            if mode == "compress" and dead_rows:
                for r in dead_rows.intersection(columns[j]):
                    del columns[j][r]
            stats.rows_processed += 1
            piv = reduce_column(j)
            if piv is not None:
                if piv >= j:
                    raise InternalInvariantError(
                        f"pivot {piv} not above column {j}; order is inconsistent"
                    )
                pairs.append(PersistencePair(piv, j))
                negatives.add(j)
                if mode == "clear":
                    cleared.add(piv)
                if mode == "compress":
                    dead_rows.add(j)
                    stats.compressed += 1
    positives = set(pivot_owner)
    for i in range(m):
        if i not in positives and i not in negatives:
            pairs.append(PersistencePair(i, None))
    pairs.sort(key=lambda p: (p.birth_index, -1 if p.death_index is None else p.death_index))
    return pairs, stats


def predicted_row_iterations(vertices: int, max_degree: int, with_compress: bool) -> int:
    """Closed-form row-visit counts for a full Vietoris-Rips complex.

    Without compress every generator of degree 0..max_degree contributes one
    visit.  With compress the rows of negative generators are skipped, which
    leaves one visit per cycle plus one for the empty-boundary bookkeeping
    term.
    """
    if vertices < 1 or max_degree < 0:
        raise UsageError("need vertices >= 1 and max_degree >= 0")
    if with_compress:
        return 1 + sum(math.comb(vertices - 1, n) for n in range(1, max_degree + 2))
    return sum(math.comb(vertices, n + 1) for n in range(max_degree + 1))


def measured_row_iterations(
    complex_input: FilteredChainComplexInput, field: PrimeField, with_compress: bool
) -> int:
    """Count row visits of the degree-blocked row reduction.

    Generators must arrive primarily sorted by degree.  The driver walks
    each degree block in decreasing entrance order, which makes every PAIR
    call exit immediately on the visited row, so a row is visited at most
    once.  Rows already deleted as negative generators still count as a
    visit without compress and are skipped with it.
    """
    keys = [label.degree for label in complex_input.labels]
    if any(a > b for a, b in zip(keys, keys[1:])):
        raise UsageError("measured_row_iterations requires degree-primary generator order")
    matrix = TotalBoundaryMatrix.build(complex_input, field)
    m = len(complex_input)
    visit_order = sorted(
        range(m),
        key=lambda g: (matrix.label(g).degree, -matrix.label(g).entrance, g),
    )
    negatives: set[int] = set()
    count = 0
    for g in visit_order:
        if not matrix.is_alive(g):
            if g not in negatives:
                raise InternalInvariantError(
                    f"generator {g} deleted before its visit without being negative"
                )
            if not with_compress:
                count += 1
            continue
        count += 1
        if matrix.row_is_zero(g):
            continue
        probe = pair_probe(matrix, g)
        if probe.pair.row != g:
            raise InternalInvariantError(
                f"degree-blocked driver expected an immediate pair on row {g}"
            )
        split(matrix, probe.pair)
        negatives.add(probe.pair.col)
    return count
