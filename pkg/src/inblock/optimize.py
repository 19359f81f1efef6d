"""Maximization of concave information objectives over code-function
distributions.

Point-to-point capacity is alternating minimization on the code-function
channel P(y^L | a^L) with the standard upper/lower bracket.  Max-min cut
objectives use projected supergradient ascent on the simplex, seeded with
exact single-cut optimizers (conditioned alternating minimization per
complement tuple) and cross-checked against an exhaustive simplex grid on
small tuple spaces.  Support reduction searches supports up to a cardinality
budget, exhaustively when feasible and by greedy pruning with restarts
otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, prod, sqrt
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import ShapeError, SizeError
from .model import (
    DEFAULT_ENUMERATION_CAP,
    BlockChannel,
    CodeFunction,
    CodeFunctionDistribution,
    NetworkSession,
    constant_code_functions,
    enumerate_code_functions,
    induced_channel,
)

BA_TOL = 1e-9
BA_MAX_ITER = 100_000


@dataclass
class OptimizationResult:
    value: float                      # bits per channel use
    distribution: np.ndarray | None
    iterations: int
    gap: float
    method: str                       # "ba" | "subgradient" | "grid"
    meta: dict = field(default_factory=dict)


# -- alternating minimization on a plain channel matrix ----------------------

def blahut_arimoto(W: np.ndarray, *, tol: float = BA_TOL,
                   max_iter: int = BA_MAX_ITER) -> tuple[float, np.ndarray, int, float]:
    """Channel capacity of row-stochastic W in bits.

    Returns (capacity lower value, maximizing input law, iterations, bracket gap).
    The lower value is within ``tol`` of capacity at termination; iterates are
    monotone nondecreasing.
    """
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] < 1:
        raise ShapeError("channel matrix must be 2-D with at least one input")
    if np.abs(W.sum(axis=1) - 1.0).max() > 1e-9:
        raise ShapeError("channel matrix rows must sum to 1")
    # Outputs unreachable under every input contribute nothing.
    W = W[:, W.sum(axis=0) > 0.0]
    m = W.shape[0]
    if m == 1 or W.shape[1] == 1:
        return 0.0, np.ones(m) / m, 0, 0.0

    logW = np.where(W > 0.0, np.log2(np.where(W > 0.0, W, 1.0)), 0.0)
    r = np.full(m, 1.0 / m)
    lower = -np.inf
    for it in range(1, max_iter + 1):
        out = r @ W
        with np.errstate(divide="ignore"):
            ref = np.where(out > 0.0, np.log2(np.where(out > 0.0, out, 1.0)), 0.0)
        D = ((logW - ref[None, :]) * W).sum(axis=1)
        new_lower = float(r @ D)
        upper = float(D.max())
        if new_lower < lower - 1e-12:
            raise ArithmeticError("alternating-minimization iterate decreased")
        lower = max(lower, new_lower)
        if upper - new_lower < tol:
            return lower, r, it, upper - new_lower
        r = r * np.exp2(D)
        r /= r.sum()
    return lower, r, max_iter, upper - new_lower


def receiver_code_function(ch: BlockChannel, k: int) -> CodeFunction:
    """The single (input-free) code function of an all-silent-input node."""
    node = ch.nodes[k - 1]
    if any(len(a) > 1 for a in node.inputs):
        raise ShapeError(f"node {k} has nontrivial inputs")
    return constant_code_functions(node.inputs, node.outputs, node=k)[0]


def output_paths(ch: BlockChannel, nodes: Iterable[int]) -> list[tuple]:
    """All joint output paths of the given nodes, ((k,i) label per slot)."""
    nodes = sorted(nodes)
    slots = [ch.output_alphabet(k, i) for k in nodes for i in range(1, ch.L + 1)]
    return list(itertools.product(*slots))


def collapse_path(y_path: tuple, nodes: Sequence[int]) -> tuple:
    return tuple(y_path[i][k - 1] for k in sorted(nodes) for i in range(len(y_path)))


def tuple_channel_matrix(ch: BlockChannel, spaces: Sequence[Sequence[CodeFunction]],
                         observed: Iterable[int]) -> np.ndarray:
    """P(observed outputs | code-function tuple), tuples in C order."""
    observed = sorted(observed)
    paths = {p: j for j, p in enumerate(output_paths(ch, observed))}
    n = prod(len(s) for s in spaces)
    W = np.zeros((n, len(paths)))
    for row, combo in enumerate(itertools.product(*spaces)):
        for y_path, p in induced_channel(ch, combo).items():
            W[row, paths[collapse_path(y_path, observed)]] += p
    return W


# -- point-to-point capacity ---------------------------------------------------

def require_point_to_point(ch: BlockChannel) -> None:
    if ch.K != 2:
        raise ShapeError(f"point-to-point channel needs K=2, got K={ch.K}")
    if any(len(a) > 1 for a in ch.nodes[1].inputs):
        raise ShapeError("node 2 must be a pure receiver (silent inputs)")


def maximize_point_to_point(ch: BlockChannel, *, feedback: bool = True,
                            cap: int = DEFAULT_ENUMERATION_CAP,
                            tol: float = BA_TOL,
                            max_iter: int = BA_MAX_ITER) -> OptimizationResult:
    """Capacity of a two-node channel in bits per use.

    With ``feedback`` the maximization runs over all code trees of node 1;
    without it only the constant (codeword) trees enter, which is the
    vector-alphabet no-feedback capacity.
    """
    require_point_to_point(ch)
    node = ch.nodes[0]
    if feedback:
        trees = enumerate_code_functions(node, cap=cap)
    else:
        trees = constant_code_functions(node.inputs, node.outputs, node=1)
    W = tuple_channel_matrix(ch, [trees, [receiver_code_function(ch, 2)]], [2])
    value, r, iters, gap = blahut_arimoto(W, tol=tol, max_iter=max_iter)
    return OptimizationResult(
        value=value / ch.L, distribution=r, iterations=iters, gap=gap / ch.L,
        method="ba", meta={"trees": tuple(trees), "feedback": feedback,
                           "bits_per_block": value})


def ptp_support_bound(ch: BlockChannel) -> int:
    """Cardinality budget for an optimal code-tree support of a two-node channel.

    min(|Y^L|, |X_1| + sum_{i>=2} |X^{i-1}| * |Ytilde^{i-1}| * (|X_i| - 1)),
    with Y the receiver outputs and Ytilde the transmitter's own (feedback)
    outputs.
    """
    require_point_to_point(ch)
    tx, rx = ch.nodes[0], ch.nodes[1]
    y_total = prod(len(a) for a in rx.outputs)
    alt = len(tx.inputs[0])
    for i in range(2, ch.L + 1):
        alt += (prod(len(a) for a in tx.inputs[:i - 1])
                * prod(len(a) for a in tx.outputs[:i - 1])
                * (len(tx.inputs[i - 1]) - 1))
    return min(y_total, alt)


# -- simplex utilities --------------------------------------------------------

def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex."""
    v = np.asarray(v, dtype=float)
    n = v.size
    a = -np.sort(-v)
    cut = (np.cumsum(a) - 1.0) / np.arange(1, n + 1)
    k = np.nonzero(a > cut)[0][-1]
    return np.maximum(v - cut[k], 0.0)


def simplex_grid(dim: int, resolution: int):
    """All weight vectors with entries j/resolution summing to 1."""
    for bars in itertools.combinations(range(resolution + dim - 1), dim - 1):
        parts = []
        prev = -1
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(resolution + dim - 2 - prev)
        yield np.asarray(parts, dtype=float) / resolution


# -- max-min cut optimization ---------------------------------------------------

class _CutObjective:
    """min (or weighted sum) over cuts of I(A_S ; Y_{S^c} | A_{S^c}),
    with analytic supergradients."""

    def __init__(self, ch: BlockChannel, spaces: Sequence[Sequence[CodeFunction]],
                 cuts: Sequence[frozenset],
                 weights: Sequence[float] | None = None):
        self.sizes = tuple(len(s) for s in spaces)
        self.n = prod(self.sizes)
        self.cuts = list(cuts)
        self.weights = None if weights is None else np.asarray(weights, dtype=float)
        self._per_cut = []
        tuples = list(itertools.product(*(range(n) for n in self.sizes)))
        for S in self.cuts:
            Sc = [k for k in range(1, ch.K + 1) if k not in S]
            W = tuple_channel_matrix(ch, spaces, Sc)
            logW = np.where(W > 0.0, np.log2(np.where(W > 0.0, W, 1.0)), 0.0)
            group_sizes = [self.sizes[k - 1] for k in Sc]
            n_groups = prod(group_sizes) if group_sizes else 1
            gid = np.empty(self.n, dtype=int)
            for row, idx in enumerate(tuples):
                g = 0
                for k in Sc:
                    g = g * self.sizes[k - 1] + idx[k - 1]
                gid[row] = g
            member = np.zeros((n_groups, self.n))
            member[gid, np.arange(self.n)] = 1.0
            self._per_cut.append((W, logW, gid, member))

    def kl_rows(self, p: np.ndarray, cut_index: int) -> np.ndarray:
        """Per-tuple divergence to its conditional output law (the supergradient)."""
        W, logW, gid, member = self._per_cut[cut_index]
        q = member @ p
        mix = member @ (p[:, None] * W)
        safe_q = np.where(q > 0.0, q, 1.0)
        cond = mix / safe_q[:, None]
        # Empty conditioning groups: any reference law gives a valid supergradient;
        # use the row itself so the divergence vanishes there.
        ref = cond[gid]
        ref = np.where((q[gid] > 0.0)[:, None], ref, W)
        with np.errstate(divide="ignore"):
            logref = np.where(W > 0.0, np.log2(np.where(ref > 0.0, ref, 1.0)), 0.0)
        return ((logW - logref) * W).sum(axis=1)

    def cut_values(self, p: np.ndarray) -> np.ndarray:
        return np.array([float(p @ self.kl_rows(p, i))
                         for i in range(len(self.cuts))])

    def __call__(self, p: np.ndarray) -> float:
        values = self.cut_values(p)
        if self.weights is not None:
            return float(self.weights @ values)
        return float(values.min())

    def supergradient(self, p: np.ndarray) -> np.ndarray:
        if self.weights is not None:
            g = np.zeros(self.n)
            for i, w in enumerate(self.weights):
                if w != 0.0:
                    g += w * self.kl_rows(p, i)
            return g
        values = self.cut_values(p)
        active = np.nonzero(values <= values.min() + 1e-12)[0]
        g = np.zeros(self.n)
        for i in active:
            g += self.kl_rows(p, i)
        return g / len(active)


def _single_cut_anchors(objective: _CutObjective, *, conditioning_cap: int = 512,
                        tol: float = BA_TOL):
    """Exact optimizers of each cut alone: best conditioning tuple + inner capacity.

    For one cut, max over joint laws of I(A_S;Y|A_{S^c}) is attained by a point
    mass on the best complement tuple, so these are true single-cut optima;
    their min (or weighted sum) upper-bounds the composite optimum.
    """
    anchors = []
    per_cut_best = []
    for i, S in enumerate(objective.cuts):
        W, _logW, gid, member = objective._per_cut[i]
        n_groups = member.shape[0]
        if n_groups > conditioning_cap:
            return anchors, None
        best = (-np.inf, None)
        for g in range(n_groups):
            rows = np.nonzero(gid == g)[0]
            value, r, _, _ = blahut_arimoto(W[rows], tol=tol)
            if value > best[0]:
                p = np.zeros(objective.n)
                p[rows] = r
                best = (value, p)
        anchors.append(best[1])
        per_cut_best.append(best[0])
    if objective.weights is not None:
        upper = float(objective.weights @ np.asarray(per_cut_best))
    else:
        upper = min(per_cut_best)
    return anchors, upper


def maximize_cutset_minimum(session: NetworkSession, ch: BlockChannel, *,
                            kind: str = "exact",
                            cut_weights=None,
                            spaces: Sequence[Sequence[CodeFunction]] | None = None,
                            iterations: int = 2000,
                            step_scale: float = 1.0,
                            seed: int = 0,
                            cap: int = DEFAULT_ENUMERATION_CAP,
                            tol: float = BA_TOL,
                            grid_dim_cap: int = 6,
                            grid_points_cap: int = 10_000) -> OptimizationResult:
    """Maximize min over message-separating cuts of the chosen cut value.

    For the exact objective (concave): projected supergradient ascent with
    c/sqrt(t) steps on the simplex over dependent code-function tuples,
    seeded by exact single-cut optimizers and checked against an exhaustive
    simplex grid when the tuple space is tiny.  Multi-message sessions have a
    region rather than a scalar; pass ``cut_weights`` (a map cut -> weight) to
    maximize the weighted-sum scalarization instead (also concave; no claim
    that sweeping weights traces the whole region boundary).  The relaxed
    kinds use forward-difference ascent with restarts and carry no concavity
    certificate.
    """
    if len(session.messages) > 1 and cut_weights is None:
        raise ShapeError(
            "multi-message sessions have a region, not a scalar; evaluate "
            "cutset_region per cut or pass cut_weights for a weighted "
            "scalarization")
    from .cutset import enumerate_cuts  # local import to avoid a cycle
    cuts = [S for S, msgs in enumerate_cuts(session) if msgs]
    if not cuts:
        raise ShapeError("no cut separates the session's message")
    weights = None
    if cut_weights is not None:
        cut_weights = {frozenset(S): float(w) for S, w in dict(cut_weights).items()}
        unknown = set(cut_weights) - set(cuts)
        if unknown:
            raise ShapeError(f"cut_weights names non-separating cuts {unknown}")
        weights = [cut_weights.get(S, 0.0) for S in cuts]
        if any(w < 0 for w in weights):
            raise ShapeError("cut weights must be nonnegative")
    if spaces is None:
        spaces = [enumerate_code_functions(n, cap=cap) for n in ch.nodes]
    if kind != "exact":
        if weights is not None:
            raise ShapeError("cut_weights is only supported for the exact kind")
        return _maximize_weakened_minimum(
            ch, spaces, cuts, kind, seed=seed,
            grid_dim_cap=grid_dim_cap, grid_points_cap=grid_points_cap)
    objective = _CutObjective(ch, spaces, cuts, weights)

    candidates: list[tuple[float, np.ndarray, str]] = []
    uniform = np.full(objective.n, 1.0 / objective.n)
    candidates.append((objective(uniform), uniform, "subgradient"))

    anchors, upper = _single_cut_anchors(objective, tol=tol)
    for p in anchors:
        candidates.append((objective(p), p, "ba"))

    start = max(candidates, key=lambda c: c[0])[1].copy()
    best_value, best_p = objective(start), start.copy()
    p = start
    for t in range(1, iterations + 1):
        g = objective.supergradient(p)
        scale = np.abs(g).max()
        if scale <= tol:
            break
        p = project_to_simplex(p + (step_scale / sqrt(t)) * g / scale)
        value = objective(p)
        if value > best_value:
            best_value, best_p = value, p.copy()
    candidates.append((best_value, best_p, "subgradient"))

    grid_value = None
    if objective.n <= grid_dim_cap:
        resolution = 1
        while (resolution < 400
               and comb(resolution + objective.n, objective.n - 1) <= grid_points_cap):
            resolution += 1
        grid_best = (-np.inf, None)
        for q in simplex_grid(objective.n, resolution):
            v = objective(q)
            if v > grid_best[0]:
                grid_best = (v, q)
        grid_value = grid_best[0]
        candidates.append((grid_best[0], grid_best[1], "grid"))

    value, p, method = max(candidates, key=lambda c: c[0])
    gap = max(upper - value, 0.0) if upper is not None else float("nan")
    return OptimizationResult(
        value=value / ch.L,
        distribution=p.reshape(objective.sizes),
        iterations=iterations, gap=gap / ch.L if upper is not None else gap,
        method=method,
        meta={"cuts": cuts, "upper_bound": upper, "grid_value": grid_value,
              "spaces": tuple(tuple(s) for s in spaces)})


def _maximize_weakened_minimum(ch, spaces, cuts, kind, *, seed=0,
                               iterations: int = 60, restarts: int = 3,
                               step_scale: float = 0.5,
                               grid_dim_cap: int = 6,
                               grid_points_cap: int = 2000) -> OptimizationResult:
    """Ascent on a relaxed min-cut objective without a concavity certificate."""
    from .cutset import weakened_bound
    from .model import joint_distribution
    sizes = tuple(len(s) for s in spaces)
    n = prod(sizes)

    def f(p):
        pa = CodeFunctionDistribution(spaces, np.maximum(p, 0.0).reshape(sizes))
        joint = joint_distribution(pa, ch)
        return min(weakened_bound(joint, S, kind) for S in cuts)

    rng = np.random.default_rng(seed)
    starts = [np.full(n, 1.0 / n)]
    starts += [rng.dirichlet(np.ones(n)) for _ in range(restarts)]
    best_value, best_p = -np.inf, starts[0]
    evaluations = 0
    delta = 1e-4
    for p in starts:
        value = f(p)
        evaluations += 1
        if value > best_value:
            best_value, best_p = value, p.copy()
        for t in range(1, iterations + 1):
            g = np.empty(n)
            for a in range(n):
                step = (1.0 - delta) * p
                step[a] += delta
                g[a] = (f(step) - value) / delta
                evaluations += 1
            scale = np.abs(g).max()
            if scale <= 1e-12:
                break
            p = project_to_simplex(p + (step_scale / sqrt(t)) * g / scale)
            value = f(p)
            evaluations += 1
            if value > best_value:
                best_value, best_p = value, p.copy()
    method = "subgradient"
    if n <= grid_dim_cap:
        resolution = 1
        while (resolution < 100
               and comb(resolution + n, n - 1) <= grid_points_cap):
            resolution += 1
        for q in simplex_grid(n, resolution):
            value = f(q)
            evaluations += 1
            if value > best_value:
                best_value, best_p, method = value, q.copy(), "grid"
    return OptimizationResult(
        value=best_value, distribution=best_p.reshape(sizes),
        iterations=evaluations, gap=float("nan"), method=method,
        meta={"cuts": cuts, "kind": kind, "concavity_certified": False,
              "spaces": tuple(tuple(s) for s in spaces)})


# -- support reduction ----------------------------------------------------------

@dataclass
class SupportReduction:
    support: tuple[int, ...]
    trees: tuple[CodeFunction, ...]
    result: OptimizationResult
    full_value: float
    gap: float
    certified: bool
    bound: int


def support_reduction(ch: BlockChannel, bound: int, *,
                      objective: Callable | None = None,
                      feedback: bool = True,
                      cap: int = DEFAULT_ENUMERATION_CAP,
                      exhaustive_cap: int = 10 ** 6,
                      tol: float = 1e-6,
                      restarts: int = 4,
                      seed: int = 0) -> SupportReduction:
    """Search code-tree supports of size at most ``bound`` for a two-node channel.

    Exhausts all supports when the binomial count fits the cap, otherwise
    prunes greedily from the full optimum with randomized restarts.  Always
    returns the best support found together with its optimality gap.  The
    default inner objective is the capacity of the restricted tree-to-output
    matrix; pass ``objective(W_restricted) -> (value, law)`` to certify a
    different concave functional on the same support lattice.
    """
    if bound < 1:
        raise ShapeError("support bound must be at least 1")
    require_point_to_point(ch)
    node = ch.nodes[0]
    trees = (enumerate_code_functions(node, cap=cap) if feedback
             else constant_code_functions(node.inputs, node.outputs, node=1))
    W = tuple_channel_matrix(ch, [trees, [receiver_code_function(ch, 2)]], [2])

    def inner(matrix):
        if objective is None:
            value, r, iters, gap = blahut_arimoto(matrix)
        else:
            value, r = objective(matrix)
            iters, gap = 0, 0.0
        return value, np.asarray(r, dtype=float), iters, gap

    full_value, full_r, _, _ = inner(W)
    size = min(bound, len(trees))

    def solve(support: tuple[int, ...]):
        return inner(W[list(support)])

    best = (-np.inf, (), None)
    if comb(len(trees), size) <= exhaustive_cap:
        for support in itertools.combinations(range(len(trees)), size):
            value, r, iters, gap = solve(support)
            if value > best[0]:
                best = (value, support, (r, iters, gap))
                if full_value - value <= 1e-9:
                    break
    else:
        rng = np.random.default_rng(seed)
        starts = [full_r] + [rng.dirichlet(np.ones(len(trees)))
                             for _ in range(restarts)]
        for r0 in starts:
            keep = list(range(len(trees)))
            mass = np.asarray(r0, dtype=float)
            while len(keep) > size:
                drop = keep[int(np.argmin(mass))]
                keep.remove(drop)
                _, mass, _, _ = inner(W[keep])
            support = tuple(keep)
            value, r, iters, gap = solve(support)
            if value > best[0]:
                best = (value, support, (r, iters, gap))

    value, support, (r, iters, gap) = best
    active = tuple(i for i, w in zip(support, r) if w > 1e-9)
    result = OptimizationResult(
        value=value / ch.L, distribution=r, iterations=iters, gap=gap / ch.L,
        method="ba", meta={"support": support, "trees": tuple(trees[i] for i in support)})
    reached = full_value - value
    return SupportReduction(
        support=active, trees=tuple(trees[i] for i in active), result=result,
        full_value=full_value / ch.L, gap=reached / ch.L,
        certified=reached / ch.L <= tol, bound=bound)


# -- exhaustive parameter grids --------------------------------------------------

def grid_maximize(objective: Callable, grids: Sequence[Sequence], *,
                  cap: int = 10 ** 7) -> OptimizationResult:
    """Exhaustive maximization over the cartesian product of parameter grids.

    Ties break to the lexicographically smallest parameter vector (the first
    one visited).
    """
    grids = [list(g) for g in grids]
    total = prod(len(g) for g in grids)
    if total > cap:
        raise SizeError(f"grid has {total} points (cap {cap})")
    best_value = -np.inf
    best_params = None
    for params in itertools.product(*grids):
        value = float(objective(*params))
        if value > best_value:
            best_value, best_params = value, params
    return OptimizationResult(
        value=best_value, distribution=None, iterations=total, gap=0.0,
        method="grid", meta={"params": best_params})
