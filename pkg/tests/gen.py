"""Random instance generators shared by the test suite."""

from __future__ import annotations

import random
from collections import Counter

import numpy as np

from chaindec import (
    FilteredChainComplexInput,
    FilteredSimplicialComplex,
    GeneratorLabel,
    IntervalSphere,
    Simplex,
    SimplicialMapWithSection,
    build_rips,
)


# Four points on a line at unit spacing and four pairwise-equidistant
# points, both under l_inf.  Same boundary matrices, different labels.
LINE_DISTANCES = np.array(
    [[0, 1, 2, 3], [1, 0, 1, 2], [2, 1, 0, 1], [3, 2, 1, 0]], dtype=float
)
GRID_DISTANCES = np.ones((4, 4)) - np.eye(4)


def random_distance_matrix(rng: random.Random, n: int, max_value: int = 4) -> np.ndarray:
    """Symmetric integer dissimilarities with deliberate ties."""
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            dist[i, j] = dist[j, i] = rng.randint(1, max_value)
    return dist


def random_vr_input(
    rng: random.Random, n_points: int, max_degree: int
) -> FilteredChainComplexInput:
    return build_rips(random_distance_matrix(rng, n_points), max_degree).chain_complex()


def planted_input(
    rng: random.Random,
    p: int,
    n_finite: int,
    n_infinite: int,
    scramble_steps: int | None = None,
    distinct_times: bool = False,
) -> tuple[FilteredChainComplexInput, Counter]:
    """A filtered chain complex with a known decomposition.

    Starts from a direct sum of interval spheres (two generators per finite
    sphere, one per open one), then hides it behind random valid changes of
    generators: substituting x_i + beta * x_k for x_i (same degree,
    entrance(k) <= entrance(i)) acts as a paired row and column operation
    and preserves every invariant.  Finally the generator order is
    shuffled.  Returns the input and the planted sphere multiset.

    With ``distinct_times`` every generator gets its own entrance time, so
    the argmin/argmax sets of the split search are singletons and the
    generator pairing (not just the sphere multiset) is unique.
    """
    if distinct_times:
        pool = rng.sample(range(1, 10 * (2 * n_finite + n_infinite) + 1), 2 * n_finite + n_infinite)
        draw_two = lambda: sorted((float(pool.pop()), float(pool.pop())))
        draw_one = lambda: float(pool.pop())
    else:
        times = [0.0, 1.0, 2.0, 3.0]
        draw_two = lambda: sorted((rng.choice(times), rng.choice(times)))
        draw_one = lambda: rng.choice(times)
    labels: list[GeneratorLabel] = []
    spheres: list[IntervalSphere] = []
    entries: dict[tuple[int, int], int] = {}
    for _ in range(n_finite):
        dim = rng.randint(0, 2)
        birth, death = draw_two()
        a = len(labels)
        labels.append(GeneratorLabel(dim, birth))
        b = len(labels)
        labels.append(GeneratorLabel(dim + 1, death))
        entries[(a, b)] = rng.randint(1, p - 1) if p > 2 else 1
        spheres.append(IntervalSphere(dim, birth, death))
    for _ in range(n_infinite):
        dim = rng.randint(0, 3)
        birth = draw_one()
        labels.append(GeneratorLabel(dim, birth))
        spheres.append(IntervalSphere(dim, birth, float("inf")))

    m = len(labels)
    dense = np.zeros((m, m), dtype=np.int64)
    for (i, j), coeff in entries.items():
        dense[i, j] = coeff

    by_degree: dict[int, list[int]] = {}
    for idx, label in enumerate(labels):
        by_degree.setdefault(label.degree, []).append(idx)
    steps = 3 * m if scramble_steps is None else scramble_steps
    for _ in range(steps):
        group = by_degree[rng.choice(list(by_degree))]
        if len(group) < 2:
            continue
        i, k = rng.sample(group, 2)
        if labels[k].entrance > labels[i].entrance:
            i, k = k, i
        if labels[k].entrance > labels[i].entrance:
            continue
        beta = rng.randint(1, p - 1)
        # substitution x_i -> x_i + beta x_k: paired row and column operation
        dense[k] = (dense[k] - beta * dense[i]) % p
        dense[:, i] = (dense[:, i] + beta * dense[:, k]) % p

    columns = tuple(
        tuple((int(i), int(dense[i, j])) for i in np.nonzero(dense[:, j])[0])
        for j in range(m)
    )
    fcc = FilteredChainComplexInput(tuple(labels), columns)
    order = list(range(m))
    rng.shuffle(order)
    return fcc.permuted(order), Counter(spheres)


def random_section_instance(
    rng: random.Random, max_points: int = 6, max_degree: int = 2
) -> tuple[FilteredSimplicialComplex, FilteredSimplicialComplex, SimplicialMapWithSection]:
    """A 1-Lipschitz fiber extension: projection f with the base inclusion s.

    Base points get random pairwise distances; extra points sit in fibers
    over base points, with distances inherited from the base across fibers
    and random positive values inside one.  The projection is then a
    simplicial filtered epimorphism and "include fiber representative 0"
    is a valid section.
    """
    n_base = rng.randint(2, 4)
    base_dist = random_distance_matrix(rng, n_base)
    total = rng.randint(n_base + 1, max_points)
    owner = list(range(n_base)) + [rng.randrange(n_base) for _ in range(total - n_base)]
    dist = np.zeros((total, total))
    for i in range(total):
        for j in range(i + 1, total):
            if owner[i] == owner[j]:
                dist[i, j] = dist[j, i] = rng.randint(1, 4)
            else:
                dist[i, j] = dist[j, i] = base_dist[owner[i], owner[j]]
    domain = build_rips(dist, max_degree)
    codomain = build_rips(base_dist, max_degree)
    maps = SimplicialMapWithSection(
        vertex_map={v: owner[v] for v in range(total)},
        section={b: b for b in range(n_base)},
    )
    return domain, codomain, maps


def sectionless_epi_instance() -> tuple[
    FilteredSimplicialComplex, FilteredSimplicialComplex, dict[int, int]
]:
    """A simplicial epimorphism with no section: a path wrapped onto a triangle.

    Vertices 0-1-2-3 of a path map to the triangle-boundary vertices
    0-1-2-0.  Every candidate section breaks on one of the three edges, and
    the connecting map of the kernel sequence is nonzero, which is what the
    regression test about H(ker f) vs ker(Hf) needs.
    """
    domain = FilteredSimplicialComplex(
        [
            Simplex((0,), 0.0),
            Simplex((1,), 0.0),
            Simplex((2,), 0.0),
            Simplex((3,), 0.0),
            Simplex((0, 1), 0.0),
            Simplex((1, 2), 0.0),
            Simplex((2, 3), 0.0),
        ]
    )
    codomain = FilteredSimplicialComplex(
        [
            Simplex((0,), 0.0),
            Simplex((1,), 0.0),
            Simplex((2,), 0.0),
            Simplex((0, 1), 0.0),
            Simplex((1, 2), 0.0),
            Simplex((0, 2), 0.0),
        ]
    )
    vertex_map = {0: 0, 1: 1, 2: 2, 3: 0}
    return domain, codomain, vertex_map
