"""Brute-force exact solvers: the ground truth for every pipeline guarantee.

Enumeration is lexicographic and exhaustive within the declared bound box;
the cap fails loudly instead of sampling.  Partial constraint sums are
maintained incrementally, but no pruning beyond the bound box is applied.
"""

from dataclasses import dataclass

from .errors import EnumerationCapExceeded
from .instances import GeneralIP, NFoldConfigInstance, NFoldNonnegInstance
from .rationals import ZERO

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    optimum: object  # Rat or None
    witness: object  # solution structure or None


def _check_cap(count, cap, what):
    if count > cap:
        raise EnumerationCapExceeded(f"{what}: {count} points exceeds cap {cap}")


def brute_force_general(inst, cap=DEFAULT_CAP):
    """Exact optimum of min w.x over H.x = b, l <= x <= u, x integer."""
    n = inst.H.cols
    m = inst.H.rows
    total = 1
    for lo, hi in zip(inst.l, inst.u):
        total *= hi - lo + 1
    _check_cap(total, cap, "general oracle")

    cols = [inst.H.column(j) for j in range(n)]
    best = None
    witness = None
    x = list(inst.l)
    resid = [ZERO] * m
    obj = ZERO
    for j in range(n):
        if inst.l[j]:
            for i in range(m):
                resid[i] = resid[i] + cols[j][i] * inst.l[j]
            obj = obj + inst.w[j] * inst.l[j]

    def rec(j, resid, obj):
        nonlocal best, witness
        if j == n:
            if all(r == b for r, b in zip(resid, inst.b)):
                if best is None or obj < best:
                    best = obj
                    witness = tuple(x)
            return
        col = cols[j]
        for v in range(inst.l[j], inst.u[j] + 1):
            x[j] = v
            rec(j + 1, resid, obj)
            if v < inst.u[j]:
                resid = [r + c for r, c in zip(resid, col)]
                obj = obj + inst.w[j]
        # restore for caller (resid/obj are rebound locally, x overwritten later)
        x[j] = inst.l[j]

    rec(0, list(resid), obj)
    if best is None:
        return OracleResult(False, None, None)
    return OracleResult(True, best, witness)


def brute_force_config(inst, cap=DEFAULT_CAP):
    """Exact optimum over all choice functions x^i in configs^i."""
    total = 1
    for blk in inst.blocks:
        total *= max(len(blk.configs), 1)
    _check_cap(total, cap, "config oracle")

    n = len(inst.blocks)
    s = len(inst.b0)
    # precompute D^i p and w^i p per config
    values = []
    costs = []
    for blk in inst.blocks:
        if not blk.configs:
            return OracleResult(False, None, None)
        values.append([blk.D.matvec(cfg) for cfg in blk.configs])
        costs.append(
            [sum((wv * cv for wv, cv in zip(blk.weights, cfg)), ZERO) for cfg in blk.configs]
        )

    best = None
    witness = None
    choice = [0] * n

    def rec(i, acc, obj):
        nonlocal best, witness
        if i == n:
            if all(a == b for a, b in zip(acc, inst.b0)):
                if best is None or obj < best:
                    best = obj
                    witness = tuple(choice)
            return
        for k in range(len(values[i])):
            choice[i] = k
            val = values[i][k]
            rec(i + 1, [a + v for a, v in zip(acc, val)], obj + costs[i][k])
        choice[i] = 0

    rec(0, [ZERO] * s, ZERO)
    if best is None:
        return OracleResult(False, None, None)
    sol = tuple(inst.blocks[i].configs[k] for i, k in enumerate(witness))
    return OracleResult(True, best, sol)


def brute_force_nfold(inst, cap=DEFAULT_CAP):
    """Exact optimum over the full integer box with all equalities exact.

    Enumerates per-block solutions of A^i x = b^i first, then the product; the
    cap still applies to the full box so failure modes match the contract.
    """
    total = 1
    for blk in inst.blocks:
        for hi in blk.u:
            total *= hi + 1
    _check_cap(total, cap, "nfold oracle")

    per_block = []
    for blk in inst.blocks:
        t = len(blk.u)
        sols = []
        x = [0] * t
        cols = [blk.A.column(j) for j in range(t)]

        def rec(j, acc, blk=blk, x=x, cols=cols, sols=sols, t=t):
            if j == t:
                if all(a == b for a, b in zip(acc, blk.bi)):
                    dsum = blk.D.matvec(tuple(x))
                    cost = sum((wv * xv for wv, xv in zip(blk.w, x)), ZERO)
                    sols.append((tuple(x), dsum, cost))
                return
            for v in range(blk.u[j] + 1):
                x[j] = v
                rec(j + 1, acc, blk, x, cols, sols, t)
                acc = [a + c for a, c in zip(acc, cols[j])]
            x[j] = 0

        rec(0, [ZERO] * blk.A.rows)
        if not sols:
            return OracleResult(False, None, None)
        per_block.append(sols)

    n = len(inst.blocks)
    best = None
    witness = None
    choice = [0] * n

    def combine(i, acc, obj):
        nonlocal best, witness
        if i == n:
            if all(a == b for a, b in zip(acc, inst.b0)):
                if best is None or obj < best:
                    best = obj
                    witness = tuple(per_block[k][c][0] for k, c in enumerate(choice))
            return
        for k, (_, dsum, cost) in enumerate(per_block[i]):
            choice[i] = k
            combine(i + 1, [a + d for a, d in zip(acc, dsum)], obj + cost)
        choice[i] = 0

    combine(0, [ZERO] * len(inst.b0), ZERO)
    if best is None:
        return OracleResult(False, None, None)
    return OracleResult(True, best, witness)


def brute_force(inst, cap=DEFAULT_CAP):
    if isinstance(inst, GeneralIP):
        return brute_force_general(inst, cap)
    if isinstance(inst, NFoldConfigInstance):
        return brute_force_config(inst, cap)
    if isinstance(inst, NFoldNonnegInstance):
        return brute_force_nfold(inst, cap)
    raise TypeError(f"unsupported instance type {type(inst)!r}")
