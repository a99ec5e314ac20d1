"""Filtered chain complexes as labelled total boundary matrices.

A filtered chain complex is handed over as an ordered list of generators,
each labelled with a degree and an entrance time, plus one boundary column
per generator.  :class:`TotalBoundaryMatrix` indexes the nonzero entries
both row-major and column-major because the decomposition alternates
argmin scans over a row with argmax scans over a column; a single
orientation would make one direction quadratic.

Deletions are logical: a removed generator keeps its index (tombstone), so
indices quoted in diagnostics and outputs stay stable for a whole run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from typing import Iterable, Iterator, Sequence

from .errors import InternalInvariantError, UsageError, ValidationError
from .field import PrimeField


@dataclass(frozen=True, order=True)
class GeneratorLabel:
    """Degree and entrance time attached to one generator."""

    degree: int
    entrance: float

    def __post_init__(self):
        if self.degree < 0:
            raise ValidationError(f"generator degree must be >= 0: got {self.degree}")
        if not (0 <= self.entrance < math.inf):
            raise ValidationError(f"entrance time must be finite and >= 0: got {self.entrance}")


@dataclass(frozen=True)
class FilteredChainComplexInput:
    """Ordered generators with raw boundary columns.

    Column coefficients are arbitrary integers; they are reduced mod p when
    a matrix is built, so the same description serves every prime (the
    simplicial boundary signs +-1 are field independent).
    """

    labels: tuple[GeneratorLabel, ...]
    columns: tuple[tuple[tuple[int, int], ...], ...]  # per generator: ((row, coeff), ...)

    def __post_init__(self):
        if len(self.labels) != len(self.columns):
            raise ValidationError(
                f"{len(self.labels)} labels but {len(self.columns)} columns"
            )

    @classmethod
    def from_lists(
        cls,
        labels: Iterable[GeneratorLabel | tuple[int, float]],
        columns: Iterable[Iterable[tuple[int, int]]],
    ) -> "FilteredChainComplexInput":
        labs = tuple(
            lab if isinstance(lab, GeneratorLabel) else GeneratorLabel(*lab) for lab in labels
        )
        cols = tuple(tuple((int(r), int(c)) for r, c in col) for col in columns)
        return cls(labs, cols)

    def __len__(self) -> int:
        return len(self.labels)

    def permuted(self, order: Sequence[int]) -> "FilteredChainComplexInput":
        """Reorder generators; ``order[k]`` is the old index placed at new position k."""
        m = len(self)
        if sorted(order) != list(range(m)):
            raise UsageError("order must be a permutation of range(m)")
        new_of_old = [0] * m
        for new, old in enumerate(order):
            new_of_old[old] = new
        labels = tuple(self.labels[old] for old in order)
        columns = tuple(
            tuple(sorted((new_of_old[r], c) for r, c in self.columns[old])) for old in order
        )
        return FilteredChainComplexInput(labels, columns)

    def sorted_by(self, mode: str) -> "FilteredChainComplexInput":
        """Stable re-sort of the generator order.

        Modes: ``entrance_then_degree`` (the order persistence algorithms
        assume), ``degree_then_entrance`` (block order for row-iteration
        counting), ``as_given``.
        """
        if mode == "as_given":
            return self
        if mode == "entrance_then_degree":
            key = lambda i: (self.labels[i].entrance, self.labels[i].degree, i)
        elif mode == "degree_then_entrance":
            key = lambda i: (self.labels[i].degree, self.labels[i].entrance, i)
        else:
            raise UsageError(f"unknown sort mode {mode!r}")
        return self.permuted(sorted(range(len(self)), key=key))


class TotalBoundaryMatrix:
    """Sparse square matrix over F_p with labelled rows and columns.

    Entry (i, j) is the coefficient of generator i in the boundary of
    generator j.  Four invariants hold at build time and are preserved by
    every operation: grading (row degree = column degree - 1), filtration
    compatibility (row entrance <= column entrance), d*d = 0, and agreement
    of the two sparse indexes.
    """

    def __init__(self, labels: Sequence[GeneratorLabel], field: PrimeField):
        self.field = field
        self.labels: list[GeneratorLabel] = list(labels)
        self._rows: dict[int, dict[int, int]] = {i: {} for i in range(len(self.labels))}
        self._cols: dict[int, dict[int, int]] = {i: {} for i in range(len(self.labels))}
        self._alive: set[int] = set(range(len(self.labels)))

    # -- construction ---------------------------------------------------

    @classmethod
    def build(
        cls, complex_input: FilteredChainComplexInput, field: PrimeField
    ) -> "TotalBoundaryMatrix":
        """Validate and index a chain complex description.

        Raises :class:`ValidationError` naming the offending entry if the
        grading, filtration compatibility, or d*d = 0 invariants fail.
        """
        matrix = cls(complex_input.labels, field)
        for j, column in enumerate(complex_input.columns):
            col_label = matrix.labels[j]
            for i, raw in column:
                if not (0 <= i < len(matrix.labels)):
                    raise ValidationError(f"column {j}: row index {i} out of range")
                coeff = field.normalize(raw)
                if coeff == 0:
                    raise ValidationError(
                        f"entry ({i}, {j}): coefficient {raw} is 0 mod {field.p}"
                    )
                row_label = matrix.labels[i]
                if row_label.degree != col_label.degree - 1:
                    raise ValidationError(
                        f"grading violation at ({i}, {j}): row degree {row_label.degree}, "
                        f"column degree {col_label.degree}"
                    )
                if row_label.entrance > col_label.entrance:
                    raise ValidationError(
                        f"filtration violation at ({i}, {j}): row enters at "
                        f"{row_label.entrance}, column at {col_label.entrance}"
                    )
                if i in matrix._cols[j]:
                    raise ValidationError(f"duplicate entry at ({i}, {j})")
                matrix._rows[i][j] = coeff
                matrix._cols[j][i] = coeff
        bad = matrix._first_nonzero_of_square()
        if bad is not None:
            raise ValidationError(
                f"differential does not square to zero: (d*d)[{bad[0]}][{bad[1]}] != 0"
            )
        return matrix

    # -- queries ---------------------------------------------------------

    @property
    def size(self) -> int:
        """Number of surviving generators."""
        return len(self._alive)

    def alive(self) -> list[int]:
        return sorted(self._alive)

    def is_alive(self, index: int) -> bool:
        return index in self._alive

    def label(self, index: int) -> GeneratorLabel:
        return self.labels[index]

    def entry(self, row: int, col: int) -> int:
        return self._rows.get(row, {}).get(col, 0)

    def row_items(self, row: int) -> Iterator[tuple[int, int]]:
        self._require_alive(row)
        return iter(self._rows[row].items())

    def col_items(self, col: int) -> Iterator[tuple[int, int]]:
        self._require_alive(col)
        return iter(self._cols[col].items())

    def row_is_zero(self, row: int) -> bool:
        self._require_alive(row)
        return not self._rows[row]

    def col_is_zero(self, col: int) -> bool:
        self._require_alive(col)
        return not self._cols[col]

    def _require_alive(self, index: int) -> None:
        if index not in self._alive:
            raise UsageError(f"generator {index} was already removed")

    # -- mutation ---------------------------------------------------------

    def add_scaled_row(self, target: int, source: int, scalar: int) -> None:
        """Row operation: row[target] += scalar * row[source], both indexes.

        Labels are untouched; a change of generators never moves degrees or
        entrance times.  Entrance safety (source entrance >= target
        entrance) is the caller's obligation, established by the split
        conditions, and is deliberately not rechecked here.
        """
        self._require_alive(target)
        self._require_alive(source)
        if target == source:
            raise UsageError("cannot add a row to itself")
        if self.labels[target].degree != self.labels[source].degree:
            raise UsageError(
                f"row degrees differ: {self.labels[target].degree} vs "
                f"{self.labels[source].degree}"
            )
        scalar = self.field.normalize(scalar)
        if scalar == 0:
            return
        target_row = self._rows[target]
        for col, value in self._rows[source].items():
            updated = (target_row.get(col, 0) + scalar * value) % self.field.p
            if updated:
                target_row[col] = updated
                self._cols[col][target] = updated
            else:
                target_row.pop(col, None)
                self._cols[col].pop(target, None)

    def delete_generator_pair(self, row: int, col: int) -> None:
        """Remove the two generators of a split pair.

        Precondition (checked): column ``col`` carries exactly one nonzero
        entry, at (row, col).  That is the state the split row additions
        force; the remaining content of row ``col`` and column ``row`` is
        discarded, which the change-of-generators argument proves safe.  A
        violation signals a bug in the caller, not bad input.
        """
        self._require_alive(row)
        self._require_alive(col)
        if row == col:
            raise UsageError("pair deletion needs two distinct generators")
        pivot = self._cols[col].get(row, 0)
        if pivot == 0:
            raise InternalInvariantError(f"pair ({row}, {col}) has zero entry ({row}, {col})")
        if len(self._cols[col]) != 1:
            extra = sorted(k for k in self._cols[col] if k != row)
            raise InternalInvariantError(
                f"column {col} still meets rows {extra}; pair deletion requires it reduced"
            )
        self._remove_index(row)
        self._remove_index(col)

    def delete_generator(self, index: int) -> None:
        """Remove one generator whose row and column are both zero."""
        self._require_alive(index)
        if self._rows[index]:
            raise UsageError(f"row {index} is not zero")
        if self._cols[index]:
            raise UsageError(f"column {index} is not zero")
        self._remove_index(index)

    def _remove_index(self, index: int) -> None:
        for col in self._rows.pop(index):
            del self._cols[col][index]
        for row in self._cols.pop(index):
            del self._rows[row][index]
        self._alive.remove(index)

    # -- diagnostics -------------------------------------------------------

    def euler_characteristic(self) -> int:
        """Alternating sum over surviving generators of (-1)^degree."""
        return sum(-1 if self.labels[i].degree % 2 else 1 for i in self._alive)

    def boundary_of_column_squared(self, col: int) -> dict[int, int]:
        """(d*d) applied to the basis vector of ``col``; {} when it vanishes."""
        self._require_alive(col)
        acc: dict[int, int] = {}
        for mid, value in self._cols[col].items():
            for row, inner in self._cols[mid].items():
                updated = (acc.get(row, 0) + value * inner) % self.field.p
                if updated:
                    acc[row] = updated
                else:
                    acc.pop(row, None)
        return acc

    def _first_nonzero_of_square(self) -> tuple[int, int] | None:
        for col in self._alive:
            square = self.boundary_of_column_squared(col)
            if square:
                return next(iter(square)), col
        return None

    def squares_to_zero(self) -> bool:
        return self._first_nonzero_of_square() is None

    def check_indexes_consistent(self) -> None:
        """Exhaustively compare the two sparse indexes (test hook)."""
        row_view = {
            (i, j): v for i, row in self._rows.items() for j, v in row.items()
        }
        col_view = {
            (i, j): v for j, colv in self._cols.items() for i, v in colv.items()
        }
        if row_view != col_view:
            raise InternalInvariantError("row-major and column-major indexes disagree")
        for (i, j), v in row_view.items():
            if not (0 < v < self.field.p):
                raise InternalInvariantError(f"entry ({i}, {j}) = {v} not a canonical residue")

    def dense(self) -> list[list[int]]:
        """Dense snapshot over the surviving indices, in alive order."""
        order = self.alive()
        position = {g: k for k, g in enumerate(order)}
        out = [[0] * len(order) for _ in order]
        for i in order:
            for j, v in self._rows[i].items():
                out[position[i]][position[j]] = v
        return out

    def to_input(self) -> FilteredChainComplexInput:
        """Re-describe the surviving generators in alive order."""
        order = self.alive()
        position = {g: k for k, g in enumerate(order)}
        labels = tuple(self.labels[g] for g in order)
        columns = tuple(
            tuple(sorted((position[i], v) for i, v in self._cols[g].items())) for g in order
        )
        return FilteredChainComplexInput(labels, columns)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TotalBoundaryMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and self._alive == other._alive
            and [self.labels[i] for i in self.alive()] == [other.labels[i] for i in other.alive()]
            and self._rows == other._rows
        )
