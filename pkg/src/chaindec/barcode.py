"""Persistence barcodes derived from interval-sphere decompositions.

Homology only sees the summands with positive length, so the conversion
drops every sphere with birth == death from the bar list.  Those spheres
are not noise, though: they separate point clouds that homology cannot
(and for Vietoris-Rips complexes the latest degree-1 one marks the
diameter), so their counts travel in a side channel instead of being
discarded.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field as dataclass_field

from .decomposition import Decomposition
from .errors import ValidationError
from .spa import PersistencePair


@dataclass(frozen=True, order=True)
class Bar:
    """A half-open interval [birth, death) of an interval module."""

    dimension: int
    birth: float
    death: float

    def __post_init__(self):
        if not (self.birth < self.death):
            raise ValidationError(f"a bar needs birth < death: [{self.birth}, {self.death})")


@dataclass(frozen=True)
class PersistenceDiagram:
    bars: tuple[Bar, ...]
    zero_length: Counter = dataclass_field(default_factory=Counter)  # (dim, time) -> count

    def multiset(self) -> Counter:
        return Counter((b.dimension, b.birth, b.death) for b in self.bars)

    def bars_in_dimension(self, dimension: int) -> list[Bar]:
        return [b for b in self.bars if b.dimension == dimension]

    def zero_length_total(self) -> int:
        return sum(self.zero_length.values())

    def sorted_bars(self) -> list[Bar]:
        return sorted(self.bars)


def to_barcode(decomposition: Decomposition) -> PersistenceDiagram:
    """Forget the zero-length summands; keep their counts on the side.

    Every sphere I^n[s, e] with s < e (e = inf included) becomes the bar
    [s, e) in dimension n.  No sphere is lost: len(spheres) equals
    len(bars) plus the zero-length total.
    """
    bars = []
    zero: Counter = Counter()
    for sphere in decomposition.spheres:
        if sphere.is_zero_length:
            zero[(sphere.dimension, sphere.birth)] += 1
        else:
            bars.append(Bar(sphere.dimension, sphere.birth, sphere.death))
    return PersistenceDiagram(tuple(bars), zero)


def diagram_from_pairs(
    labels, pairs: list[PersistencePair]
) -> PersistenceDiagram:
    """Bars from pivot pairs: the module-level view of a column reduction."""
    bars = []
    zero: Counter = Counter()
    for p in pairs:
        birth_label = labels[p.birth_index]
        if p.death_index is None:
            bars.append(Bar(birth_label.degree, birth_label.entrance, math.inf))
            continue
        death = labels[p.death_index].entrance
        if birth_label.entrance < death:
            bars.append(Bar(birth_label.degree, birth_label.entrance, death))
        else:
            zero[(birth_label.degree, birth_label.entrance)] += 1
    return PersistenceDiagram(tuple(bars), zero)


def diameter_witness(decomposition: Decomposition) -> float | None:
    """Largest birth among dimension-1 spheres.

    On the decomposition of a full Vietoris-Rips filtration this equals the
    diameter of the point cloud: the last edge to appear closes a cycle
    that the simultaneously arriving triangles cap immediately.  Returns
    None when no dimension-1 sphere exists (fewer than three points, or
    max_degree < 1).
    """
    births = [s.birth for s in decomposition.spheres if s.dimension == 1]
    return max(births) if births else None
