import random

import pytest

from nearfeas.apps import gap_to_config, knapsack_to_general, scheduling_to_config
from nearfeas.instances import ApproxParams
from nearfeas.oracle import brute_force_general
from nearfeas.rationals import Rat
from nearfeas.results import SolveStatus
from nearfeas.solver_config import solve_nfold_config
from nearfeas.solver_general import solve_general


def test_knapsack_two_items():
    inst, decode = knapsack_to_general([4, 5], [[3, 4]], [5])
    orc = brute_force_general(inst)
    assert orc.feasible and orc.optimum == -5
    assert decode(orc.witness) == (0, 1)


def test_knapsack_zero_items():
    inst, decode = knapsack_to_general([], [[]], [7])
    orc = brute_force_general(inst)
    assert orc.feasible and orc.optimum == 0
    assert orc.witness == (7,)  # slack = capacity
    assert decode(orc.witness) == ()


def test_knapsack_zero_capacity():
    inst, decode = knapsack_to_general([3, 2], [[1, 1]], [0])
    orc = brute_force_general(inst)
    assert orc.feasible and orc.optimum == 0
    assert decode(orc.witness) == (0, 0)


def test_knapsack_solve_pipeline():
    inst, decode = knapsack_to_general([4, 5], [[3, 4]], [5])
    res = solve_general(inst, ApproxParams.build(Rat(1, 5)))
    assert res.status == SolveStatus.OK
    assert res.objective <= -5


def test_scheduling_small_cases():
    inst, decode = scheduling_to_config([[1, 2], [2, 1]], 2)
    res = solve_nfold_config(inst, ApproxParams.build(Rat(1, 2)))
    assert res.status == SolveStatus.OK
    d = decode(res.x)
    assert d.loads == (Rat(1), Rat(1))

    inst2, decode2 = scheduling_to_config([[1]], 1)
    res2 = solve_nfold_config(inst2, ApproxParams.build(Rat(1, 2)))
    d2 = decode2(res2.x)
    assert d2.assignment == (0,) and d2.makespan == 1

    # unit-vector configurations: job blocks have kappa = 1 and t = m
    inst3, _ = scheduling_to_config([[2, 3]], 4)
    job_block = inst3.blocks[0]
    assert job_block.D.cols == 2
    assert all(max(abs(v) for v in cfg) == 1 for cfg in job_block.configs)


def test_scheduling_additive_guarantee():
    rng = random.Random(99)
    for _ in range(8):
        n, m = rng.randint(1, 4), rng.randint(1, 3)
        p = [[rng.randint(1, 5) for _ in range(m)] for _ in range(n)]
        loads = [0] * m
        for i in range(n):
            h = rng.randrange(m)
            loads[h] += p[i][h]
        cmax = max(max(loads), 1)
        inst, decode = scheduling_to_config(p, cmax)
        eps = Rat(1, 2)
        res = solve_nfold_config(inst, ApproxParams.build(eps))
        assert res.status == SolveStatus.OK
        d = decode(res.x)
        maxp = max(v for row in p for v in row)
        assert d.makespan <= cmax + eps * maxp


def test_scheduling_rational_times_are_scaled():
    inst, decode = scheduling_to_config([[Rat(1, 2), Rat(3, 2)]], Rat(3, 2))
    res = solve_nfold_config(inst, ApproxParams.build(Rat(1, 2)))
    d = decode(res.x)
    assert d.makespan in (Rat(1, 2), Rat(3, 2))


def test_roundtrip_residuals():
    # decoding then re-encoding reproduces the same residuals
    inst, decode = scheduling_to_config([[1, 2], [2, 1]], 2)
    res = solve_nfold_config(inst, ApproxParams.build(Rat(1, 2)))
    d = decode(res.x)
    reencoded = []
    for i, h in enumerate(d.assignment):
        reencoded.append(tuple(1 if k == h else 0 for k in range(2)))
    for want, got in zip(res.x[: len(reencoded)], reencoded):
        assert want == got


def test_gap_small_cases():
    inst, decode = gap_to_config([[1, 1]], [[3, 1]], 1)
    res = solve_nfold_config(inst, ApproxParams.build(Rat(1, 2)))
    d, within = decode(res.x)
    assert d.assignment == (1,)
    assert d.cost == 1
    assert within is None

    # equal costs: a deterministic assignment is returned
    inst2, decode2 = gap_to_config([[1, 1]], [[2, 2]], 1, budget=5)
    res2 = solve_nfold_config(inst2, ApproxParams.build(Rat(1, 2)))
    d2, within2 = decode2(res2.x)
    assert d2.cost == 2 and within2 is True

    res2b = solve_nfold_config(inst2, ApproxParams.build(Rat(1, 2)))
    d2b, _ = decode2(res2b.x)
    assert d2b.assignment == d2.assignment  # determinism


def test_gap_infeasible_cmax_flagged():
    # single job with p = 3 on both machines, cmax = 1, eps = 1/10:
    # loads cannot come near cmax
    inst, decode = gap_to_config([[3, 3]], [[1, 1]], 1)
    res = solve_nfold_config(inst, ApproxParams.build(Rat(1, 10)))
    assert res.status == SolveStatus.NEAR_FEASIBILITY_UNATTAINABLE
    assert not res.report.within_bound


def test_knapsack_rejects_bad_data():
    with pytest.raises(ValueError):
        knapsack_to_general([1], [[-1]], [2])
    with pytest.raises(ValueError):
        knapsack_to_general([1], [[1], [1]], [2])
