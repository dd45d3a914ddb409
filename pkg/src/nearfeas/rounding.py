"""Integralization of the few remaining fractional variables.

Two mechanisms, each preserving its constraint family exactly and never
increasing the objective: greedy within-group rounding (group sums are
integers, so rounding up the cheapest gamma fractional members and flooring
the rest conserves the sum), and an exact LP re-solve over a totally
unimodular bipartite restriction (vertex solutions of TU systems with
integral data are integral).
"""

from dataclasses import dataclass

from .errors import PipelineInvariantError
from .linalg import Matrix
from .rationals import ONE, ZERO, is_integral, rat_floor
from .simplex import LinearProgram, LPStatus, solve_lp_vertex


@dataclass(frozen=True)
class GroupRoundingPlan:
    """Fractional members of one group, sorted by nondecreasing weight."""

    members: tuple  # variable keys, sorted by (weight, key)
    floors: tuple
    fracs: tuple  # nonzero fractional parts, aligned with members
    gamma: int

    @classmethod
    def build(cls, entries):
        """entries: iterable of (key, value, weight) for one group."""
        fractional = []
        for key, value, weight in entries:
            if not is_integral(value):
                fl = rat_floor(value)
                fractional.append((weight, key, fl, value - fl))
        fractional.sort(key=lambda e: (e[0], e[1]))
        gamma = sum((e[3] for e in fractional), ZERO)
        if not is_integral(gamma):
            raise PipelineInvariantError("group fractional mass is not an integer")
        return cls(
            tuple(e[1] for e in fractional),
            tuple(e[2] for e in fractional),
            tuple(e[3] for e in fractional),
            int(gamma),
        )


def greedy_group_round(plan):
    """Round the gamma cheapest fractional members up, the rest down.

    Returns {key: integer value}; the group sum is conserved exactly and the
    group objective cannot exceed the fractional group objective.
    """
    out = {}
    for pos, key in enumerate(plan.members):
        out[key] = plan.floors[pos] + (1 if pos < plan.gamma else 0)
    return out


@dataclass(frozen=True)
class AssignmentRestriction:
    """Bipartite system over the fractional entries of an assignment.

    Every variable appears in exactly one left row and one right row, so the
    constraint matrix is the incidence matrix of a bipartite graph and hence
    totally unimodular; the marginals must be integers.
    """

    keys: tuple  # variable keys, in deterministic order
    left_of: tuple  # left row index per variable
    right_of: tuple  # right row index per variable
    left_rhs: tuple  # integer marginals
    right_rhs: tuple
    costs: tuple

    def __post_init__(self):
        for rhs in (*self.left_rhs, *self.right_rhs):
            if not is_integral(rhs):
                raise PipelineInvariantError("non-integral marginal in TU restriction")


def tu_round(restriction, stats=None):
    """Exact 0/1 re-solve of the restriction; returns {key: 0 or 1}.

    Both marginal families are preserved exactly and the restricted objective
    does not exceed the fractional restricted objective.
    """
    nv = len(restriction.keys)
    if nv == 0:
        return {}
    nl = len(restriction.left_rhs)
    nr = len(restriction.right_rhs)
    entries = [ZERO] * ((nl + nr) * nv)
    for k in range(nv):
        entries[restriction.left_of[k] * nv + k] = ONE
        entries[(nl + restriction.right_of[k]) * nv + k] = ONE
    lp = LinearProgram(
        Matrix(nl + nr, nv, entries),
        tuple(restriction.left_rhs) + tuple(restriction.right_rhs),
        (ZERO,) * nv,
        (ONE,) * nv,
        restriction.costs,
    )
    sol = solve_lp_vertex(lp)
    if stats is not None:
        stats.lp_pivots += sol.pivots
    if sol.status != LPStatus.OPTIMAL:
        raise PipelineInvariantError("TU restriction lost feasibility")
    out = {}
    for k, key in enumerate(restriction.keys):
        v = sol.values[k]
        if v != 0 and v != 1:
            raise PipelineInvariantError("TU vertex is not 0/1")
        out[key] = int(v)
    return out
