import random

import pytest
from hypothesis import given, settings, strategies as st

from nearfeas.boxes import (
    BoxIndex,
    box_index,
    canonical_vector,
    partition_columns,
    partition_config_columns,
    snap_delta,
)
from nearfeas.linalg import Matrix
from nearfeas.rationals import Rat


def test_snap_delta():
    assert snap_delta(Rat(1, 2)) == Rat(1, 2)
    assert snap_delta(Rat(2, 5)) == Rat(1, 3)  # 1/ceil(5/2)
    assert snap_delta(Rat(3)) == Rat(1)
    with pytest.raises(ValueError):
        snap_delta(Rat(0))


def test_box_index_examples():
    assert box_index((Rat(0), Rat(0)), Rat(1, 2), Rat(1)).lambdas == (0, 0)
    assert box_index((Rat(1), Rat(-1)), Rat(1, 2), Rat(1)).lambdas == (2, -1)
    assert box_index((Rat(3, 10), Rat(-1, 5)), Rat(1, 2), Rat(1)).lambdas == (1, 0)


def test_box_index_out_of_range():
    with pytest.raises(ValueError):
        box_index((Rat(2),), Rat(1, 2), Rat(1))


def test_canonical_vector_examples():
    assert canonical_vector(BoxIndex((1, 1)), Rat(1, 2), Rat(1)) == (Rat(0), Rat(0))
    assert canonical_vector(BoxIndex((0, 0)), Rat(1, 2), Rat(1)) == (
        Rat(-1, 2),
        Rat(-1, 2),
    )
    assert canonical_vector(BoxIndex((2, -1)), Rat(1, 2), Rat(1)) == (Rat(1, 2), Rat(-1))


def test_partition_identical_columns_share_group():
    H = Matrix.from_rows([[1, 1], [0, 0]])
    part = partition_columns(H, Rat(1, 2))
    assert len(part.groups) == 1
    for j in range(2):
        idx = box_index(H.column(j), part.delta, part.scale)
        canon = part.canonicals[idx]
        assert tuple(c + r for c, r in zip(canon, part.residuals[j])) == H.column(j)


def test_partition_close_columns_two_groups():
    H = Matrix.from_rows([[1, Rat(9, 10)], [0, Rat(1, 10)]])
    part = partition_columns(H, Rat(1, 2))
    assert len(part.groups) == 2


def test_partition_covers_all_columns():
    rng = random.Random(5)
    for _ in range(20):
        m, n = rng.randint(1, 3), rng.randint(1, 6)
        H = Matrix.from_rows(
            [[Rat(rng.randint(-4, 4), rng.randint(1, 2)) for _ in range(n)] for _ in range(m)]
        )
        part = partition_columns(H, Rat(1, 3))
        assert sum(len(g) for g in part.groups.values()) == n


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 3),
    st.integers(1, 5),
    st.integers(2, 5),
    st.randoms(use_true_random=False),
)
def test_partition_invariants(m, n, inv_delta, rnd):
    H = Matrix.from_rows(
        [[Rat(rnd.randint(-6, 6), rnd.randint(1, 3)) for _ in range(n)] for _ in range(m)]
    )
    delta = Rat(1, inv_delta)
    part = partition_columns(H, delta)
    side = part.delta * part.scale
    for j in range(n):
        col = H.column(j)
        idx = box_index(col, part.delta, part.scale)
        canon = part.canonicals[idx]
        # exact reconstruction and residual bound
        assert tuple(c + r for c, r in zip(canon, part.residuals[j])) == col
        assert all(abs(r) <= side for r in part.residuals[j])
    # two columns in one group differ by at most the cell side, componentwise
    for members in part.groups.values():
        for a in members:
            for b in members:
                for va, vb in zip(H.column(a), H.column(b)):
                    assert abs(va - vb) <= side


def test_config_partition_identical_blocks():
    mats = [Matrix.from_rows([[1, 0]]), Matrix.from_rows([[1, 0]])]
    part = partition_config_columns(mats, Rat(1, 2))
    assert len(part.type_groups) == 1
    (members,) = part.type_groups.values()
    assert members == [0, 1]


def test_config_partition_distinct_types():
    mats = [Matrix.from_rows([[1, 0]]), Matrix.from_rows([[0, 1]])]
    part = partition_config_columns(mats, Rat(1, 2))
    assert len(part.type_groups) == 2


def test_config_partition_occupancy_bound():
    rng = random.Random(9)
    mats = [
        Matrix.from_rows([[Rat(rng.randint(-2, 2)) for _ in range(2)]]) for _ in range(6)
    ]
    part = partition_config_columns(mats, Rat(1, 4))
    assert len(part.type_groups) <= 6
    # residual bound entrywise
    side = part.delta * part.scale
    for resid in part.residual_matrices:
        for col in resid:
            assert all(abs(v) <= side for v in col)


def test_config_partition_shape_mismatch():
    with pytest.raises(ValueError):
        partition_config_columns(
            [Matrix.from_rows([[1]]), Matrix.from_rows([[1, 2]])], Rat(1, 2)
        )
