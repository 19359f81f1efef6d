"""Cut bounds on network joints: the exact conditional-information bound,
its directed-information and input-output relaxations, the additive-noise and
deterministic specializations, and the split bound used for causal relay
networks.

All evaluators take a joint built by ``model.joint_distribution`` (so code
functions appear as per-time component variables) together with a node set S;
values come back in bits per channel use (divided by the block length) with
the raw per-block value carried alongside.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import ShapeError
from .model import BlockChannel, CodeFunctionDistribution, NetworkSession, joint_distribution
from .probability import (
    JointBlockDistribution,
    causally_conditioned_entropy,
    delayed,
    directed_information,
    merge_blocks,
    mutual_information,
)

EXACT = "exact"
DIRECTED = "directed-weakened"
INPUT_OUTPUT = "input-output-weakened"
ADDITIVE = "additive-noise"
DETERMINISTIC = "deterministic"
BAIK = "baik"

WEAKENED_KINDS = (DIRECTED, INPUT_OUTPUT, ADDITIVE, DETERMINISTIC)

MAX_CUT_NODES = 16


@dataclass(frozen=True)
class CutBoundReport:
    cut: frozenset
    messages: tuple[str, ...]
    bits_per_use: float
    bits_per_block: float
    kind: str


def _node_count(joint: JointBlockDistribution) -> int:
    return max(v.node for v in joint.variables if v.node is not None)


def _split_cut(joint: JointBlockDistribution, S: Iterable[int]) -> tuple[frozenset, frozenset]:
    K = _node_count(joint)
    S = frozenset(S)
    all_nodes = frozenset(range(1, K + 1))
    if not S or S == all_nodes or not S <= all_nodes:
        raise ShapeError(f"cut {sorted(S)} must be a nonempty proper subset of 1..{K}")
    return S, all_nodes - S


def _time_blocks(joint: JointBlockDistribution, kind: str, nodes: Iterable[int],
                 horizon: int | None = None) -> list[list[str]]:
    L = horizon if horizon is not None else joint.horizon
    nodes = set(nodes)
    return [list(joint.select(kind=kind, nodes=nodes, times=[i]))
            for i in range(1, L + 1)]


def cut_mutual_information(joint: JointBlockDistribution, S: Iterable[int]) -> float:
    """I(A_S^L ; Y_{S^c}^L | A_{S^c}^L) / L, the exact per-use cut value."""
    S, Sc = _split_cut(joint, S)
    value = mutual_information(
        joint,
        joint.select(kind="code", nodes=S),
        joint.select(kind="output", nodes=Sc),
        joint.select(kind="code", nodes=Sc))
    return value / joint.horizon


def weakened_bound(joint: JointBlockDistribution, S: Iterable[int], kind: str) -> float:
    """One of the relaxed cut expressions, in bits per use.

    ``directed-weakened`` drops the future tree levels from the conditioning;
    ``input-output-weakened`` replaces code functions with channel inputs and
    delayed outputs; ``additive-noise`` subtracts the causal noise entropy
    (requires a channel built with ``BlockChannel.additive``); ``deterministic``
    keeps only the causal output entropy (requires a noise-free channel).
    """
    S, Sc = _split_cut(joint, S)
    L = joint.horizon
    y_sc = _time_blocks(joint, "output", Sc)
    if kind == DIRECTED:
        value = directed_information(
            joint, _time_blocks(joint, "code", S), y_sc,
            _time_blocks(joint, "code", Sc))
    elif kind == INPUT_OUTPUT:
        src = merge_blocks(_time_blocks(joint, "input", S),
                           delayed(_time_blocks(joint, "output", S)))
        value = directed_information(joint, src, y_sc,
                                     _time_blocks(joint, "input", Sc))
    elif kind == ADDITIVE:
        ch = joint.meta.get("channel")
        if ch is None or ch.noise_block is None:
            raise ShapeError(
                "additive-noise relaxation needs a channel with a noise block")
        noise = ch.noise_block
        noise_term = causally_conditioned_entropy(
            noise, _time_blocks(noise, "noise", Sc, L),
            _time_blocks(noise, "noise", S, L), delay=True)
        value = causally_conditioned_entropy(
            joint, y_sc, _time_blocks(joint, "input", Sc)) - noise_term
    elif kind == DETERMINISTIC:
        ch = joint.meta.get("channel")
        if ch is None or not ch.is_deterministic():
            raise ShapeError("deterministic relaxation needs a noise-free channel")
        value = causally_conditioned_entropy(
            joint, y_sc, _time_blocks(joint, "input", Sc))
    else:
        raise ShapeError(f"unknown weakened kind {kind!r}; pick one of {WEAKENED_KINDS}")
    return value / L


def baik_bound(joint: JointBlockDistribution, S: Iterable[int],
               N0: Iterable[int], N1: Iterable[int]) -> float:
    """Split bound for causal relay networks, in bits per use.

    ``N0`` holds the causal relays (may use the current block's symbols) and
    ``N1`` the strictly causal ones; the first term relaxes times 1..L-1 to
    inputs/outputs while keeping the causal relays' trees, the second term is
    the final-letter information carried by the strictly causal inputs and the
    causal trees inside the cut.
    """
    S, Sc = _split_cut(joint, S)
    K = _node_count(joint)
    N0, N1 = frozenset(N0), frozenset(N1)
    if N0 & N1 or (N0 | N1) != frozenset(range(1, K + 1)):
        raise ShapeError("N0 and N1 must partition the node set")
    L = joint.horizon
    given = list(joint.select(kind="code", nodes=Sc & N0))

    value = 0.0
    if L > 1:
        head = slice(0, L - 1)
        y_sc = _time_blocks(joint, "output", Sc)[head]
        src = merge_blocks(_time_blocks(joint, "input", S)[head],
                           delayed(_time_blocks(joint, "output", S)[head]))
        value += directed_information(joint, src, y_sc,
                                      _time_blocks(joint, "input", Sc)[head],
                                      given=given)
    value += mutual_information(
        joint,
        list(joint.select(kind="input", nodes=S & N1))
        + list(joint.select(kind="code", nodes=S & N0)),
        joint.select(kind="output", nodes=Sc, times=[L]),
        list(joint.select(kind="output", nodes=Sc, times=range(1, L)))
        + list(joint.select(kind="input", nodes=Sc))
        + given)
    return value / L


def enumerate_cuts(session: NetworkSession) -> list[tuple[frozenset, tuple]]:
    """All (S, separated messages) pairs over nonempty proper node subsets."""
    if session.K > MAX_CUT_NODES:
        raise ShapeError(f"refusing to enumerate cuts for K={session.K} > {MAX_CUT_NODES}")
    out = []
    nodes = list(range(1, session.K + 1))
    for mask in range(1, 2 ** session.K - 1):
        S = frozenset(k for b, k in enumerate(nodes) if (mask >> b) & 1)
        out.append((S, session.separated(S)))
    return out


def cutset_region(session: NetworkSession, ch: BlockChannel,
                  pa: CodeFunctionDistribution, *,
                  all_cuts: bool = False,
                  kind: str = EXACT) -> list[CutBoundReport]:
    """One report per cut that separates a message (all cuts with ``all_cuts``).

    Cuts separating no message bound nothing; they are skipped unless
    ``all_cuts`` asks for them explicitly (useful when debugging a session).
    """
    if ch.K != session.K:
        raise ShapeError("session and channel disagree on the node count")
    joint = joint_distribution(pa, ch)
    reports = []
    for S, messages in enumerate_cuts(session):
        if not messages and not all_cuts:
            continue
        if kind == EXACT:
            per_use = cut_mutual_information(joint, S)
        else:
            per_use = weakened_bound(joint, S, kind)
        reports.append(CutBoundReport(
            cut=S, messages=tuple(m.name for m in messages),
            bits_per_use=per_use, bits_per_block=per_use * ch.L, kind=kind))
    return reports
