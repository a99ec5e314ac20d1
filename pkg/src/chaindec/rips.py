"""Filtered simplicial complexes and Vietoris-Rips construction.

The simplices of a filtered simplicial complex form a quasi-minimal set of
generators of its chain complex, so :meth:`FilteredSimplicialComplex.chain_complex`
is the bridge into the boundary-matrix machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .boundary import FilteredChainComplexInput, GeneratorLabel
from .errors import UsageError, ValidationError


@dataclass(frozen=True)
class Simplex:
    """A simplex as a strictly increasing vertex tuple plus its entrance time."""

    vertices: tuple[int, ...]
    entrance: float

    def __post_init__(self):
        if not self.vertices:
            raise ValidationError("a simplex needs at least one vertex")
        if any(b <= a for a, b in zip(self.vertices, self.vertices[1:])):
            raise ValidationError(f"vertices must be strictly increasing: {self.vertices}")
        if not (0 <= self.entrance < math.inf):
            raise ValidationError(f"entrance time must be finite and >= 0: {self.entrance}")

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1

    def faces(self) -> list[tuple[int, ...]]:
        """Codimension-1 faces, k-th obtained by dropping the k-th vertex."""
        v = self.vertices
        return [v[:k] + v[k + 1 :] for k in range(len(v))]


class FilteredSimplicialComplex:
    """Face-closed list of simplices with entrance-monotone filtration values."""

    def __init__(self, simplices: Iterable[Simplex]):
        self.simplices: tuple[Simplex, ...] = tuple(simplices)
        self.index: dict[tuple[int, ...], int] = {}
        for pos, simplex in enumerate(self.simplices):
            if simplex.vertices in self.index:
                raise ValidationError(f"duplicate simplex {simplex.vertices}")
            self.index[simplex.vertices] = pos
        for simplex in self.simplices:
            if simplex.dimension == 0:
                continue
            for face in simplex.faces():
                face_pos = self.index.get(face)
                if face_pos is None:
                    raise ValidationError(
                        f"missing face {face} of simplex {simplex.vertices}"
                    )
                if self.simplices[face_pos].entrance > simplex.entrance:
                    raise ValidationError(
                        f"face {face} enters at {self.simplices[face_pos].entrance}, after "
                        f"{simplex.vertices} at {simplex.entrance}"
                    )

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def vertex_set(self) -> set[int]:
        return {s.vertices[0] for s in self.simplices if s.dimension == 0}

    def entrance_of(self, vertices: tuple[int, ...]) -> float:
        return self.simplices[self.index[vertices]].entrance

    def max_dimension(self) -> int:
        return max((s.dimension for s in self.simplices), default=-1)

    def chain_complex(self) -> FilteredChainComplexInput:
        """Boundary description with the standard alternating-sign faces.

        The k-th face of a simplex (sorted vertex order) carries coefficient
        (-1)^k; over characteristic 2 the signs collapse but the description
        is sign-correct for every prime.
        """
        labels = tuple(GeneratorLabel(s.dimension, s.entrance) for s in self.simplices)
        columns = []
        for simplex in self.simplices:
            if simplex.dimension == 0:
                columns.append(())
                continue
            column = []
            for k, face in enumerate(simplex.faces()):
                column.append((self.index[face], -1 if k % 2 else 1))
            columns.append(tuple(sorted(column)))
        return FilteredChainComplexInput(labels, tuple(columns))


def validate_distance_matrix(distances: np.ndarray) -> np.ndarray:
    dist = np.asarray(distances, dtype=float)
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise ValidationError(f"distance matrix must be square: shape {dist.shape}")
    if dist.shape[0] == 0:
        raise ValidationError("distance matrix is empty")
    if not np.array_equal(dist, dist.T):
        raise ValidationError("distance matrix is not symmetric")
    if np.any(np.diag(dist) != 0):
        raise ValidationError("distance matrix diagonal must be zero")
    if np.any(dist < 0):
        raise ValidationError("distances must be non-negative")
    return dist


def build_rips(
    distances: np.ndarray, max_degree: int, threshold: float | None = None
) -> FilteredSimplicialComplex:
    """Vietoris-Rips filtration of a dissimilarity matrix.

    Emits every simplex of dimension <= max_degree whose entrance time (the
    maximum pairwise distance of its vertices) does not exceed the
    threshold.  No triangle inequality is assumed.  Simplices are listed by
    dimension and lexicographically within a dimension, which doubles as the
    tie-break order everywhere downstream.
    """
    if max_degree < 0:
        raise UsageError(f"max_degree must be >= 0: got {max_degree}")
    dist = validate_distance_matrix(distances)
    cutoff = math.inf if threshold is None else float(threshold)
    if cutoff < 0:
        raise UsageError(f"threshold must be >= 0: got {threshold}")
    n = dist.shape[0]
    simplices: list[Simplex] = [Simplex((v,), 0.0) for v in range(n)]
    for dim in range(1, max_degree + 1):
        for verts in combinations(range(n), dim + 1):
            entrance = max(float(dist[a, b]) for a, b in combinations(verts, 2))
            if entrance <= cutoff:
                simplices.append(Simplex(verts, entrance))
    return FilteredSimplicialComplex(simplices)


def point_cloud_distances(points: np.ndarray, metric: str = "euclidean") -> np.ndarray:
    """Pairwise distances of a coordinate array under euclidean or l_inf."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValidationError(f"point cloud must be a non-empty 2d array: shape {pts.shape}")
    diff = pts[:, None, :] - pts[None, :, :]
    if metric == "euclidean":
        return np.sqrt((diff**2).sum(axis=2))
    if metric in ("l_inf", "linf", "l-inf"):
        return np.abs(diff).max(axis=2)
    raise UsageError(f"unknown metric {metric!r}")


def sort_generators(
    complex_input: FilteredChainComplexInput, mode: str
) -> FilteredChainComplexInput:
    """Stable generator re-sort; see FilteredChainComplexInput.sorted_by."""
    return complex_input.sorted_by(mode)


def full_rips_complex(n_points: int, max_degree: int | None = None) -> FilteredSimplicialComplex:
    """Full complex on n points, all positive-dimensional entrances equal 1."""
    dist = np.ones((n_points, n_points)) - np.eye(n_points)
    degree = n_points - 1 if max_degree is None else max_degree
    return build_rips(dist, degree)


def simplex_counts(complex_: FilteredSimplicialComplex) -> dict[int, int]:
    counts: dict[int, int] = {}
    for simplex in complex_:
        counts[simplex.dimension] = counts.get(simplex.dimension, 0) + 1
    return counts


def diameter(distances: np.ndarray | Sequence[Sequence[float]]) -> float:
    return float(np.max(validate_distance_matrix(np.asarray(distances, dtype=float))))
