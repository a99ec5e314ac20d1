from __future__ import annotations

import math
import random
from collections import Counter

import numpy as np
import pytest

from chaindec import (
    FilteredChainComplexInput,
    GeneratorLabel,
    IntervalSphere,
    PrimeField,
    SplitPair,
    TotalBoundaryMatrix,
    UsageError,
    count_emergent_and_apparent,
    decompose,
    pair,
    pair_probe,
    split,
    split_trivial,
)
from gen import planted_input, random_vr_input
from oracles import (
    HomologyRankOracle,
    dense_total_matrix,
    verify_split_change_of_basis,
)

INF = math.inf

LINE_MULTISET = Counter(
    {
        IntervalSphere(0, 0, 1): 3,
        IntervalSphere(1, 2, 2): 2,
        IntervalSphere(1, 3, 3): 1,
        IntervalSphere(2, 3, 3): 1,
        # 15 generators pair off into 7 finite summands, which forces
        # exactly one unpaired generator: the surviving component.
        IntervalSphere(0, 0, INF): 1,
    }
)

GRID_MULTISET = Counter(
    {
        IntervalSphere(0, 0, 1): 3,
        IntervalSphere(1, 1, 1): 3,
        IntervalSphere(2, 1, 1): 1,
        IntervalSphere(0, 0, INF): 1,
    }
)


def idx(complex_):
    return dict(complex_.index)


def block(matrix, rows, cols):
    return [[matrix.entry(i, j) for j in cols] for i in rows]


# -- PAIR ---------------------------------------------------------------------


def test_pair_line_from_row_xy(line_complex, line_input, field2):
    matrix = TotalBoundaryMatrix.build(line_input, field2)
    names = idx(line_complex)
    probe = pair_probe(matrix, names[(0, 1)])
    assert probe.pair == SplitPair(names[(0, 2)], names[(0, 1, 2)])
    assert probe.updates == 1  # row moved once, from xy to xz
    assert probe.exit_test == "cofacet"
    assert probe.row_entrances == (1, 2)
    assert probe.col_entrances == (2,)


def test_pair_grid_from_row_xy(grid_complex, grid_input, field2):
    matrix = TotalBoundaryMatrix.build(grid_input, field2)
    names = idx(grid_complex)
    probe = pair_probe(matrix, names[(0, 1)])
    assert probe.pair == SplitPair(names[(0, 1)], names[(0, 1, 2)])
    assert probe.updates == 0
    assert probe.exit_test == "facet"


def test_pair_on_unique_entry(field2):
    fcc = FilteredChainComplexInput(
        (GeneratorLabel(0, 0.0), GeneratorLabel(1, 1.0)), ((), ((0, 1),))
    )
    matrix = TotalBoundaryMatrix.build(fcc, field2)
    assert pair(matrix, 0) == SplitPair(0, 1)


def test_pair_rejects_zero_row(line_input, field2):
    matrix = TotalBoundaryMatrix.build(line_input, field2)
    with pytest.raises(UsageError):
        pair(matrix, 14)  # the tetrahedron bounds nothing


# -- SPLIT --------------------------------------------------------------------


def test_split_line_replay(line_complex, line_input, field2):
    matrix = TotalBoundaryMatrix.build(line_input, field2)
    names = idx(line_complex)
    edges = [names[v] for v in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]]
    triangles = [names[v] for v in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]]
    split_pair = pair(matrix, names[(0, 1)])
    # replay the row additions through the primitive to inspect the
    # intermediate state the split passes through
    staging = TotalBoundaryMatrix.build(line_input, field2)
    for target in (names[(0, 1)], names[(1, 2)]):
        staging.add_scaled_row(target, names[(0, 2)], 1)
    assert block(staging, edges, triangles) == [
        [0, 1, 1, 0],
        [1, 0, 1, 0],
        [0, 1, 1, 0],
        [0, 0, 1, 1],
        [0, 1, 0, 1],
        [0, 0, 1, 1],
    ]
    sphere = split(matrix, split_pair)
    assert sphere == IntervalSphere(1, 2, 2)
    survivors_e = [e for e in edges if e != names[(0, 2)]]
    survivors_t = [t for t in triangles if t != names[(0, 1, 2)]]
    assert block(matrix, survivors_e, survivors_t) == [
        [1, 1, 0],
        [1, 1, 0],
        [0, 1, 1],
        [1, 0, 1],
        [0, 1, 1],
    ]


def test_split_grid_replay(grid_complex, grid_input, field2):
    matrix = TotalBoundaryMatrix.build(grid_input, field2)
    names = idx(grid_complex)
    edges = [names[v] for v in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]]
    triangles = [names[v] for v in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]]
    split_pair = pair(matrix, names[(0, 1)])
    staging = TotalBoundaryMatrix.build(grid_input, field2)
    for target in (names[(0, 2)], names[(1, 2)]):
        staging.add_scaled_row(target, names[(0, 1)], 1)
    assert block(staging, edges, triangles) == [
        [1, 1, 0, 0],
        [0, 1, 1, 0],
        [0, 1, 1, 0],
        [0, 1, 0, 1],
        [0, 1, 0, 1],
        [0, 0, 1, 1],
    ]
    sphere = split(matrix, split_pair)
    assert sphere == IntervalSphere(1, 1, 1)
    survivors_e = [e for e in edges if e != names[(0, 1)]]
    survivors_t = [t for t in triangles if t != names[(0, 1, 2)]]
    assert block(matrix, survivors_e, survivors_t) == [
        [1, 1, 0],
        [1, 1, 0],
        [1, 0, 1],
        [1, 0, 1],
        [0, 1, 1],
    ]


def test_split_two_generator_block():
    field = PrimeField(7)
    fcc = FilteredChainComplexInput(
        (GeneratorLabel(0, 1.0), GeneratorLabel(1, 2.0)), ((), ((0, 3),))
    )
    matrix = TotalBoundaryMatrix.build(fcc, field)
    sphere = split(matrix, SplitPair(0, 1))
    assert sphere == IntervalSphere(0, 1, 2)
    assert matrix.size == 0


def test_split_rejects_condition_violations(line_complex, line_input, field2):
    names = idx(line_complex)
    matrix = TotalBoundaryMatrix.build(line_input, field2)
    with pytest.raises(UsageError, match="SC1"):
        split(matrix, SplitPair(names[(2, 3)], names[(0, 1, 2)]))
    with pytest.raises(UsageError, match="SC2"):
        split(matrix, SplitPair(names[(0, 1)], names[(0, 1, 2)]))  # xz enters later
    # one cycle capped twice: the later cap is argmax-valid in its column
    # but not entrance-minimal in the row
    two_caps = FilteredChainComplexInput(
        (GeneratorLabel(0, 0.0), GeneratorLabel(1, 1.0), GeneratorLabel(1, 2.0)),
        ((), ((0, 1),), ((0, 1),)),
    )
    small = TotalBoundaryMatrix.build(two_caps, field2)
    with pytest.raises(UsageError, match="SC3"):
        split(small, SplitPair(0, 2))


def test_split_trivial(field2):
    fcc = FilteredChainComplexInput((GeneratorLabel(0, 0.0),), ((),))
    matrix = TotalBoundaryMatrix.build(fcc, field2)
    assert split_trivial(matrix, 0) == IntervalSphere(0, 0, INF)
    assert matrix.size == 0


def test_split_trivial_rejects_nonzero(line_input, field2):
    matrix = TotalBoundaryMatrix.build(line_input, field2)
    with pytest.raises(UsageError):
        split_trivial(matrix, 0)


# -- decompose ------------------------------------------------------------------


def test_line_decomposition(line_input, field2):
    assert decompose(line_input, field2).multiset() == LINE_MULTISET


def test_grid_decomposition(grid_input, field2):
    assert decompose(grid_input, field2).multiset() == GRID_MULTISET


def test_zero_differential_gives_open_spheres(field2):
    labels = (GeneratorLabel(0, 0.0), GeneratorLabel(2, 1.0), GeneratorLabel(5, 2.0))
    fcc = FilteredChainComplexInput(labels, ((), (), ()))
    result = decompose(fcc, field2)
    assert result.multiset() == Counter(
        {
            IntervalSphere(0, 0, INF): 1,
            IntervalSphere(2, 1, INF): 1,
            IntervalSphere(5, 2, INF): 1,
        }
    )


def test_empty_complex(field2):
    result = decompose(FilteredChainComplexInput((), ()), field2)
    assert result.multiset() == Counter()


def test_strategies_agree(line_input, grid_input, field2):
    for fcc in (line_input, grid_input):
        a = decompose(fcc, field2, strategy="entrance").multiset()
        b = decompose(fcc, field2, strategy="as-given").multiset()
        assert a == b


def test_unknown_strategy_rejected(line_input, field2):
    with pytest.raises(UsageError):
        decompose(line_input, field2, strategy="random")


@pytest.mark.parametrize("p", [2, 3, 5])
def test_planted_decompositions_recovered(p):
    rng = random.Random(100 + p)
    for _ in range(12):
        fcc, expected = planted_input(
            rng, p, n_finite=rng.randint(2, 8), n_infinite=rng.randint(0, 3)
        )
        result = decompose(fcc, PrimeField(p))
        assert result.multiset() == expected


def test_order_invariance_small():
    rng = random.Random(5)
    field = PrimeField(3)
    fcc, expected = planted_input(rng, 3, n_finite=6, n_infinite=2)
    for _ in range(10):
        order = list(range(len(fcc)))
        rng.shuffle(order)
        shuffled = fcc.permuted(order)
        for strategy in ("entrance", "as-given"):
            assert decompose(shuffled, field, strategy=strategy).multiset() == expected


def test_pairing_indices_are_disjoint_and_cover(line_input, field2):
    result = decompose(line_input, field2)
    used = [i for s in result.summands for i in (s.birth_index, s.death_index) if i is not None]
    assert sorted(used) == list(range(15))


def test_conservation_and_euler(line_input, grid_input, field2):
    for fcc in (line_input, grid_input):
        matrix = TotalBoundaryMatrix.build(fcc, field2)
        euler = matrix.euler_characteristic()
        result = decompose(fcc, field2)
        assert 2 * result.finite_count() + result.infinite_count() == len(fcc)
        signed = sum(
            (-1) ** s.sphere.dimension for s in result.summands if s.sphere.is_infinite
        )
        assert signed == euler


def test_pair_monotonicity_on_traced_runs(field2):
    rng = random.Random(9)
    for _ in range(5):
        fcc = random_vr_input(rng, rng.randint(3, 6), 3)
        result = decompose(fcc, field2, trace=True)
        for event in result.trace.events:
            rows = event.probe.row_entrances
            cols = event.probe.col_entrances
            assert all(a < b for a, b in zip(rows, rows[1:]))
            assert all(a > b for a, b in zip(cols, cols[1:]))


def run_with_split_verification(fcc: FilteredChainComplexInput, p: int) -> Counter:
    """Default-strategy driver replaying every split against the dense oracle."""
    field = PrimeField(p)
    matrix = TotalBoundaryMatrix.build(fcc, field)
    m = len(fcc)
    scan = sorted(range(m), key=lambda g: (fcc.labels[g].entrance, fcc.labels[g].degree, g))
    spheres: list[IntervalSphere] = []
    while True:
        start = next(
            (g for g in scan if matrix.is_alive(g) and not matrix.row_is_zero(g)), None
        )
        if start is None:
            break
        found = pair(matrix, start)
        alive = matrix.alive()
        positions = {g: k for k, g in enumerate(alive)}
        before = np.array(
            [[matrix.entry(i, j) for j in alive] for i in alive], dtype=np.int64
        )
        spheres.append(split(matrix, found))
        survivors = matrix.alive()
        after = np.array(
            [[matrix.entry(i, j) for j in survivors] for i in survivors], dtype=np.int64
        )
        verify_split_change_of_basis(before, positions, found.row, found.col, p, after)
        assert matrix.squares_to_zero()
        matrix.check_indexes_consistent()
    for g in matrix.alive():
        spheres.append(split_trivial(matrix, g))
    return Counter(spheres)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_every_split_matches_dense_change_of_basis(p, line_input, grid_input):
    rng = random.Random(40 + p)
    cases = [line_input, grid_input] if p == 2 else []
    cases.append(planted_input(rng, p, n_finite=5, n_infinite=2)[0])
    cases.append(random_vr_input(rng, 4, 3))
    for fcc in cases:
        verified = run_with_split_verification(fcc, p)
        assert verified == decompose(fcc, PrimeField(p)).multiset()


@pytest.mark.parametrize("p", [2, 3])
def test_barcode_matches_dense_homology_oracle(p):
    rng = random.Random(60 + p)
    from chaindec import to_barcode

    for _ in range(6):
        fcc = random_vr_input(rng, rng.randint(3, 6), rng.randint(1, 3))
        oracle = HomologyRankOracle(fcc, p)
        diagram = to_barcode(decompose(fcc, PrimeField(p)))
        assert diagram.multiset() == oracle.barcode()
        assert diagram.zero_length == oracle.zero_length_counts()


# -- apparent and emergent pairs ---------------------------------------------------


def test_grid_pair_classes(grid_input, field2):
    spa_order = grid_input.sorted_by("entrance_then_degree")
    result = decompose(spa_order, field2, trace=True)
    classes = count_emergent_and_apparent(result)
    # first split (vertex x, edge xy) happens on the pristine matrix; all
    # later immediate exits count as emergent facet pairs
    assert classes.apparent == 1
    assert classes.emergent_facet == 6
    assert classes.emergent_cofacet == 0


def test_line_pair_classes(line_input, field2):
    spa_order = line_input.sorted_by("entrance_then_degree")
    result = decompose(spa_order, field2, trace=True)
    classes = count_emergent_and_apparent(result)
    assert classes.apparent == 1
    assert classes.apparent + classes.emergent_facet + classes.emergent_cofacet <= 7


def test_zero_differential_pair_classes(field2):
    fcc = FilteredChainComplexInput((GeneratorLabel(0, 0.0),), ((),))
    result = decompose(fcc, field2, trace=True)
    assert count_emergent_and_apparent(result) == type(
        count_emergent_and_apparent(result)
    )(0, 0, 0)


def test_pair_classes_need_trace_and_order(line_input, grid_input, field2):
    untraced = decompose(grid_input.sorted_by("entrance_then_degree"), field2)
    with pytest.raises(UsageError):
        count_emergent_and_apparent(untraced)
    # on the line cloud, degree-primary order is not entrance-sorted
    wrong_order = decompose(line_input.sorted_by("degree_then_entrance"), field2, trace=True)
    with pytest.raises(UsageError):
        count_emergent_and_apparent(wrong_order)
