"""Pipeline for block IPs whose blocks choose from explicit configuration sets.

Each block contributes one column D^i x^i from its precomputed value matrix;
blocks whose value matrices fall columnwise into the same boxes share a type,
and one integer variable per (type, column) counts selections across the
type's blocks.  After the exact mixed solve, the selection variables are
re-solved to a vertex at fixed counts (few fractional entries survive by the
two-part rank argument) and integralized by an exact re-solve over the
totally unimodular bipartite restriction.

The coupling rows carry slack columns bounded per row by the permitted
violation; slack-bounded infeasibility is therefore independent of the box
width and certifies that no selection meets the bound, which is reported as
NEAR_FEASIBILITY_UNATTAINABLE together with a best-effort (coupling-free)
cost-minimal selection and its exact violation.  Structural infeasibility
(an empty configuration set) is the only INFEASIBLE outcome.
"""

from dataclasses import dataclass

from .boxes import partition_config_columns
from .branch_bound import MIPStatus, MixedModel, SolveStats, solve_mip
from .errors import InvalidInstanceError, PipelineInvariantError, RefinementLimitExceeded
from .instances import ADDITIVE, validate_config, violation_report
from .linalg import Matrix
from .rationals import ONE, Rat, ZERO, is_integral
from .results import ApproxResult, SolveStatus
from .rounding import AssignmentRestriction, tu_round
from .simplex import LinearProgram, LPStatus, nonintegral_support, solve_lp_vertex


@dataclass(frozen=True)
class NormalizedConfig:
    """Per-block configs deduplicated and padded to a uniform count tau."""

    inst: object
    tau: int
    configs: tuple  # per block: tuple of tau integer vectors
    value_mats: tuple  # per block: Matrix s x tau with columns D^i p^i_phi
    costs: tuple  # per block: tuple of tau exact config costs


def normalize_configs(inst):
    """Returns the normalized instance, or None if some config set is empty."""
    deduped = []
    for blk in inst.blocks:
        seen = []
        for cfg in blk.configs:
            if cfg not in seen:
                seen.append(cfg)
        if not seen:
            return None
        deduped.append(seen)
    tau = max(len(cfgs) for cfgs in deduped)
    configs = []
    value_mats = []
    costs = []
    for blk, cfgs in zip(inst.blocks, deduped):
        padded = list(cfgs) + [cfgs[0]] * (tau - len(cfgs))
        cols = [blk.D.matvec(cfg) for cfg in padded]
        s = blk.D.rows
        value_mats.append(
            Matrix(s, tau, [cols[phi][r] for r in range(s) for phi in range(tau)])
        )
        configs.append(tuple(padded))
        costs.append(
            tuple(
                sum((wv * cv for wv, cv in zip(blk.weights, cfg)), ZERO)
                for cfg in padded
            )
        )
    return NormalizedConfig(inst, tau, tuple(configs), tuple(value_mats), tuple(costs))


@dataclass(frozen=True)
class ConfigModel:
    norm: NormalizedConfig
    part: object
    mixed: MixedModel
    tau: int
    z_col: dict  # (block, phi) -> column
    y_col: dict  # (type key, phi) -> column
    slack_cols: tuple
    block_type: tuple  # type key per block


def build_mip4(norm, part, slack_bounds=None):
    """Mixed model over selection variables z and per-(type, column) counts y.

    Any choice function of the original instance maps to a feasible 0/1 z
    with equal objective, so the model optimum never exceeds the original's.
    """
    inst = norm.inst
    n = len(inst.blocks)
    tau = norm.tau
    s = len(inst.b0)
    keys = tuple(part.type_groups.keys())
    nz = n * tau
    ny = len(keys) * tau
    nslack = s if slack_bounds is not None else 0
    cols = nz + ny + nslack

    z_col = {}
    for i in range(n):
        for phi in range(tau):
            z_col[(i, phi)] = i * tau + phi
    y_col = {}
    for k, key in enumerate(keys):
        for phi in range(tau):
            y_col[(key, phi)] = nz + k * tau + phi

    block_type = [None] * n
    for key, members in part.type_groups.items():
        for i in members:
            block_type[i] = key

    rows = s + len(keys) * tau + n
    entries = [ZERO] * (rows * cols)
    rhs = []
    # coupling rows: canonical part on y, residual part on z, slack
    for r in range(s):
        base = r * cols
        for k, key in enumerate(keys):
            canon = part.canonical_matrices[key]
            for phi in range(tau):
                entries[base + y_col[(key, phi)]] = canon[phi][r]
        for i in range(n):
            resid = part.residual_matrices[i]
            for phi in range(tau):
                entries[base + z_col[(i, phi)]] = resid[phi][r]
        if nslack:
            entries[base + nz + ny + r] = -ONE
        rhs.append(inst.b0[r])
    # linking rows: selections of a (type, column) sum to its count
    row = s
    for key in keys:
        for phi in range(tau):
            base = row * cols
            for i in part.type_groups[key]:
                entries[base + z_col[(i, phi)]] = ONE
            entries[base + y_col[(key, phi)]] = -ONE
            rhs.append(ZERO)
            row += 1
    # selection rows: each block picks exactly one column
    for i in range(n):
        base = row * cols
        for phi in range(tau):
            entries[base + z_col[(i, phi)]] = ONE
        rhs.append(ONE)
        row += 1

    lower = [ZERO] * nz
    upper = [ONE] * nz
    objective = []
    for i in range(n):
        objective.extend(norm.costs[i])
    for key in keys:
        size = len(part.type_groups[key])
        for _ in range(tau):
            lower.append(ZERO)
            upper.append(Rat(size))
            objective.append(ZERO)
    for r in range(nslack):
        lower.append(-slack_bounds[r])
        upper.append(slack_bounds[r])
        objective.append(ZERO)

    lp = LinearProgram(
        Matrix(rows, cols, entries), tuple(rhs), tuple(lower), tuple(upper), tuple(objective)
    )
    mixed = MixedModel(lp, frozenset(range(nz, nz + ny)))
    return ConfigModel(
        norm, part, mixed, tau, z_col, y_col, tuple(range(nz + ny, cols)), tuple(block_type)
    )


def fix_counts_lp(model, mixed_sol):
    """LP over z with coupling residuals pinned to their attained values and
    the (type, column) counts pinned to the mixed optimum."""
    norm, part, tau = model.norm, model.part, model.tau
    inst = norm.inst
    n = len(inst.blocks)
    s = len(inst.b0)
    nz = n * tau
    zstar = mixed_sol.values[:nz]
    keys = tuple(part.type_groups.keys())

    rows = s + len(keys) * tau + n
    entries = [ZERO] * (rows * nz)
    rhs = []
    for r in range(s):
        base = r * nz
        acc = ZERO
        for i in range(n):
            resid = part.residual_matrices[i]
            for phi in range(tau):
                c = resid[phi][r]
                if c:
                    col = model.z_col[(i, phi)]
                    entries[base + col] = c
                    if zstar[col]:
                        acc = acc + c * zstar[col]
        rhs.append(acc)
    row = s
    for key in keys:
        for phi in range(tau):
            base = row * nz
            acc = ZERO
            for i in part.type_groups[key]:
                col = model.z_col[(i, phi)]
                entries[base + col] = ONE
                acc = acc + zstar[col]
            rhs.append(acc)
            row += 1
    for i in range(n):
        base = row * nz
        for phi in range(tau):
            entries[base + model.z_col[(i, phi)]] = ONE
        rhs.append(ONE)
        row += 1

    objective = []
    for i in range(n):
        objective.extend(norm.costs[i])
    return LinearProgram(
        Matrix(rows, nz, entries),
        tuple(rhs),
        (ZERO,) * nz,
        (ONE,) * nz,
        tuple(objective),
    )


def build_restriction(model, vertex):
    """Bipartite restriction over the fractional selection entries."""
    norm, part, tau = model.norm, model.part, model.tau
    n = len(norm.inst.blocks)
    values = vertex.values
    frac = [
        (i, phi)
        for i in range(n)
        for phi in range(tau)
        if not is_integral(values[model.z_col[(i, phi)]])
    ]
    if not frac:
        return None
    blocks = sorted({i for i, _ in frac})
    pairs = sorted({(model.block_type[i], phi) for i, phi in frac}, key=lambda p: (p[0], p[1]))
    left_index = {i: r for r, i in enumerate(blocks)}
    right_index = {p: r for r, p in enumerate(pairs)}

    left_rhs = []
    for i in blocks:
        acc = ONE
        for phi in range(tau):
            v = values[model.z_col[(i, phi)]]
            if is_integral(v) and v:
                acc = acc - v
        left_rhs.append(acc)
    right_rhs = []
    for key, phi in pairs:
        acc = ZERO
        for i in part.type_groups[key]:
            v = values[model.z_col[(i, phi)]]
            if is_integral(v):
                acc = acc + v
        count = sum(
            (values[model.z_col[(i, phi)]] for i in part.type_groups[key]), ZERO
        )
        right_rhs.append(count - acc)

    return AssignmentRestriction(
        tuple(frac),
        tuple(left_index[i] for i, _ in frac),
        tuple(right_index[(model.block_type[i], phi)] for i, phi in frac),
        tuple(left_rhs),
        tuple(right_rhs),
        tuple(norm.costs[i][phi] for i, phi in frac),
    )


def _selection_from_values(model, values, rounded):
    """Per-block selected column; exactly one per block after rounding."""
    norm, tau = model.norm, model.tau
    n = len(norm.inst.blocks)
    chosen = []
    for i in range(n):
        picks = []
        for phi in range(tau):
            v = rounded.get((i, phi))
            if v is None:
                v = values[model.z_col[(i, phi)]]
            if v == 1:
                picks.append(phi)
            elif v != 0:
                raise PipelineInvariantError("selection entry not 0/1 after rounding")
        if len(picks) != 1:
            raise PipelineInvariantError("block does not select exactly one column")
        chosen.append(picks[0])
    return tuple(chosen)


def _attempt(norm, delta, slack_bounds, params, stats, trace):
    """One mixed solve + vertex restriction + TU rounding at a given width.

    Returns (chosen columns, x, objective), or None when the slack-bounded
    model is infeasible (a width-independent fact).
    """
    inst = norm.inst
    part = partition_config_columns(norm.value_mats, delta)
    model = build_mip4(norm, part, slack_bounds=slack_bounds)
    mixed = solve_mip(model.mixed, node_limit=params.node_limit, stats=stats)
    if mixed.status == MIPStatus.INFEASIBLE:
        return None

    lp = fix_counts_lp(model, mixed)
    vertex = solve_lp_vertex(lp)
    stats.lp_pivots += vertex.pivots
    if vertex.status != LPStatus.OPTIMAL:
        raise PipelineInvariantError("fixed-count restriction lost feasibility")
    s = len(inst.b0)
    support = nonintegral_support(vertex)
    if len(support) > s * (2 * model.tau + 1):
        raise PipelineInvariantError(
            f"fractional support {len(support)} exceeds s(2tau+1)"
        )
    if trace is not None:
        trace.fixed_y_vertices.append(
            (lp, vertex, s, model.tau, _type_submatrices(model, vertex, support))
        )

    restriction = build_restriction(model, vertex)
    if restriction is None:
        rounded = {}
    else:
        rounded = tu_round(restriction, stats=stats)
        _check_marginals(model, vertex, rounded)
        if trace is not None:
            frac_obj = sum(
                (
                    norm.costs[i][phi] * vertex.values[model.z_col[(i, phi)]]
                    for i, phi in restriction.keys
                ),
                ZERO,
            )
            trace.tu_calls.append((restriction, frac_obj, rounded))

    chosen = _selection_from_values(model, vertex.values, rounded)
    x = tuple(norm.configs[i][phi] for i, phi in enumerate(chosen))
    objective = sum((norm.costs[i][phi] for i, phi in enumerate(chosen)), ZERO)
    if objective > vertex.objective_value or vertex.objective_value > mixed.objective_value:
        raise PipelineInvariantError("objective chain violated")
    return chosen, x, objective


def _check_marginals(model, vertex, rounded):
    part, tau = model.part, model.tau
    for key, members in part.type_groups.items():
        for phi in range(tau):
            before = sum((vertex.values[model.z_col[(i, phi)]] for i in members), ZERO)
            after = ZERO
            for i in members:
                v = rounded.get((i, phi))
                if v is None:
                    v = vertex.values[model.z_col[(i, phi)]]
                after = after + v
            if before != after:
                raise PipelineInvariantError("type marginal not conserved by rounding")


def _type_submatrices(model, vertex, support):
    """Per type: assignment-constraint submatrix restricted to its fractional
    selection entries (rank is bounded by 2 tau)."""
    norm, part, tau = model.norm, model.part, model.tau
    out = []
    for key, members in part.type_groups.items():
        frac = [
            (i, phi)
            for i in members
            for phi in range(tau)
            if model.z_col[(i, phi)] in support
        ]
        if not frac:
            continue
        rows = len(members) + tau
        member_row = {i: r for r, i in enumerate(members)}
        entries = [ZERO] * (rows * len(frac))
        for c, (i, phi) in enumerate(frac):
            entries[member_row[i] * len(frac) + c] = ONE
            entries[(len(members) + phi) * len(frac) + c] = ONE
        out.append(Matrix(rows, len(frac), entries))
    return out


def _free_bounds(norm):
    """Slack bounds large enough never to bind (best-effort diagnostics)."""
    inst = norm.inst
    s = len(inst.b0)
    bounds = []
    for r in range(s):
        reach = abs(inst.b0[r]) + 1
        for mat in norm.value_mats:
            reach = reach + max((abs(v) for v in mat.row(r)), default=ZERO)
        bounds.append(reach)
    return tuple(bounds)


def solve_config_core(inst, params, violation_bounds, stats=None, trace=None):
    """Shared driver: per-row violation bounds decide acceptance; the attached
    report uses the uniform additive bound max(violation_bounds)."""
    problems, delta_inf = validate_config(inst)
    if problems:
        raise InvalidInstanceError(problems)
    norm = normalize_configs(inst)
    stats = stats if stats is not None else SolveStats()
    if norm is None:
        return ApproxResult(SolveStatus.INFEASIBLE, None, None, None, None, 0, stats)

    report_bound = max(violation_bounds) if violation_bounds else ZERO
    s = len(inst.b0)
    t = inst.blocks[0].D.cols
    kappa = max(inst.kappa(), 1)
    tau = norm.tau
    delta0 = (
        params.delta_override
        if params.delta_override is not None
        else params.epsilon / (s * (2 * tau + 1) * kappa * t)
    )

    delta = delta0
    for refinement in range(params.refinement_limit + 1):
        attempt = _attempt(norm, delta, violation_bounds, params, stats, trace)
        if attempt is None:
            # No selection satisfies the per-row bounds, at any width: report
            # the best-effort coupling-free optimum and its exact violation.
            fallback = _attempt(norm, delta, _free_bounds(norm), params, stats, trace)
            if fallback is None:
                raise PipelineInvariantError("coupling-free model cannot be infeasible")
            _, x, objective = fallback
            report = violation_report(inst, x, ADDITIVE, report_bound, objective)
            return ApproxResult(
                SolveStatus.NEAR_FEASIBILITY_UNATTAINABLE,
                x,
                objective,
                report,
                delta,
                refinement,
                stats,
            )
        _, x, objective = attempt
        report = violation_report(inst, x, ADDITIVE, report_bound, objective)
        residual = report.residual
        if all(abs(r) <= b for r, b in zip(residual, violation_bounds)):
            return ApproxResult(
                SolveStatus.OK, x, objective, report, delta, refinement, stats
            )
        delta = delta / 2
    raise RefinementLimitExceeded(
        f"violation bound not met after {params.refinement_limit} refinements"
    )


def solve_nfold_config(inst, params, trace=None):
    """Additive guarantee: every coupling row within epsilon * max_i ||D^i||."""
    problems, delta_inf = validate_config(inst)
    if problems:
        raise InvalidInstanceError(problems)
    bound = params.epsilon * delta_inf
    return solve_config_core(
        inst, params, tuple(bound for _ in inst.b0), trace=trace
    )
