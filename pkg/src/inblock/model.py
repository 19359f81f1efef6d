"""Channels with in-block memory, code functions, and network sessions.

A channel couples K nodes over a block of L letters through causal per-time
kernels W_i(y_{K,i} | x_K^i, y_K^{i-1}); there is no memory across blocks, so
one block is stored.  Singleton alphabets mark absent inputs or outputs.

A code function (code tree) for a node maps each feedback history to the next
channel input; under the in-block model a node's feedback is its own output
string, but the map machinery is alphabet-generic so shared-output channels
(full-feedback multiaccess) can reuse it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import InvalidDistributionError, ShapeError, SizeError
from .probability import (
    PROB_TOL,
    FiniteDistribution,
    JointBlockDistribution,
    Variable,
)

SILENT = (0,)  # canonical one-letter alphabet for "no input/output here"

DEFAULT_ENUMERATION_CAP = 10 ** 6


def sorted_alphabet(alphabet: Iterable) -> tuple:
    labels = tuple(alphabet)
    try:
        return tuple(sorted(labels))
    except TypeError:
        return tuple(sorted(labels, key=repr))


@dataclass(frozen=True)
class NodeSpec:
    """Per-node alphabets (one per block letter) and message index sets."""

    node: int
    inputs: tuple[tuple, ...]
    outputs: tuple[tuple, ...]
    encode: tuple[str, ...] = ()
    decode: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.inputs) != len(self.outputs):
            raise ShapeError(f"node {self.node}: inputs/outputs horizon mismatch")
        for alphabets in (self.inputs, self.outputs):
            for a in alphabets:
                if len(a) == 0:
                    raise ShapeError(f"node {self.node}: empty alphabet")
        if set(self.encode) & set(self.decode):
            raise ShapeError(f"node {self.node}: decodes one of its own messages")

    @property
    def L(self) -> int:
        return len(self.inputs)


@dataclass(frozen=True)
class Message:
    name: str
    source: int
    sinks: frozenset

    def __post_init__(self):
        if self.source in self.sinks:
            raise ShapeError(f"message {self.name!r}: source is one of its sinks")


class NetworkSession:
    """Messages riding on a K-node channel; cut membership is derived."""

    def __init__(self, K: int, messages: Sequence[Message]):
        if not messages:
            raise ShapeError("session has no messages")
        for m in messages:
            if not (1 <= m.source <= K) or not all(1 <= s <= K for s in m.sinks):
                raise ShapeError(f"message {m.name!r} references unknown nodes")
        names = [m.name for m in messages]
        if len(set(names)) != len(names):
            raise ShapeError("duplicate message names")
        self.K = K
        self.messages = tuple(messages)

    def decode_set(self, k: int) -> tuple[str, ...]:
        return tuple(m.name for m in self.messages if k in m.sinks)

    def separated(self, S: Iterable[int]) -> tuple[Message, ...]:
        """Messages with source inside the cut and some sink outside it."""
        S = frozenset(S)
        Sc = frozenset(range(1, self.K + 1)) - S
        return tuple(m for m in self.messages
                     if m.source in S and (m.sinks & Sc))


# -- code functions ----------------------------------------------------------

@lru_cache(maxsize=None)
def _history_index(feedback_prefix: tuple) -> dict:
    """Lexicographic index of feedback histories over a tuple of alphabets."""
    return {h: i for i, h in enumerate(itertools.product(*feedback_prefix))}


@dataclass(frozen=True)
class CodeFunction:
    """A total map from feedback histories to inputs, one table per letter."""

    node: int
    inputs: tuple[tuple, ...]
    feedbacks: tuple[tuple, ...]
    tables: tuple[tuple, ...]

    def __post_init__(self):
        L = len(self.inputs)
        if len(self.feedbacks) != L or len(self.tables) != L:
            raise ShapeError("code function horizon mismatch")
        for i in range(L):
            n_hist = prod(len(a) for a in self.feedbacks[:i])
            if len(self.tables[i]) != n_hist:
                raise ShapeError(
                    f"code function table at time {i + 1} has {len(self.tables[i])} "
                    f"entries, expected {n_hist}")
            for x in self.tables[i]:
                if x not in self.inputs[i]:
                    raise ShapeError(f"code function emits {x!r} outside its alphabet")

    @property
    def L(self) -> int:
        return len(self.inputs)

    def apply(self, i: int, history: tuple):
        """Input letter at time i (1-based) for the given feedback history."""
        idx = _history_index(self.feedbacks[:i - 1])[tuple(history)]
        return self.tables[i - 1][idx]

    def component(self, i: int) -> tuple:
        """The time-i (1-based) level of the tree, as a hashable table."""
        return self.tables[i - 1]

    def is_constant(self) -> bool:
        return all(len(set(t)) == 1 for t in self.tables)


def code_function_count(inputs: Sequence[tuple], feedbacks: Sequence[tuple]) -> int:
    """Exact number of distinct code functions: prod_i |X_i|^{|Y^{i-1}|}."""
    total = 1
    for i, x in enumerate(inputs):
        total *= len(x) ** prod(len(a) for a in feedbacks[:i])
    return total


def enumerate_maps(inputs: Sequence[tuple], feedbacks: Sequence[tuple], *,
                   node: int = 0,
                   cap: int = DEFAULT_ENUMERATION_CAP) -> list[CodeFunction]:
    """All code functions, lexicographic over (time, history) with sorted labels."""
    inputs = tuple(tuple(a) for a in inputs)
    feedbacks = tuple(tuple(a) for a in feedbacks)
    count = code_function_count(inputs, feedbacks)
    if count > cap:
        raise SizeError(
            f"node {node}: {count} code functions exceed the cap of {cap}; "
            "raise the cap or restrict the support")
    per_time = []
    for i, x in enumerate(inputs):
        n_hist = prod(len(a) for a in feedbacks[:i])
        per_time.append(list(itertools.product(sorted_alphabet(x), repeat=n_hist)))
    return [CodeFunction(node, inputs, feedbacks, tables)
            for tables in itertools.product(*per_time)]


def enumerate_code_functions(node: NodeSpec, *,
                             cap: int = DEFAULT_ENUMERATION_CAP) -> list[CodeFunction]:
    """All code trees of a node (feedback = its own channel outputs)."""
    return enumerate_maps(node.inputs, node.outputs, node=node.node, cap=cap)


def constant_code_functions(inputs: Sequence[tuple], feedbacks: Sequence[tuple], *,
                            node: int = 0) -> list[CodeFunction]:
    """The codeword-like trees that ignore feedback, one per input string."""
    inputs = tuple(tuple(a) for a in inputs)
    feedbacks = tuple(tuple(a) for a in feedbacks)
    out = []
    for xs in itertools.product(*(sorted_alphabet(a) for a in inputs)):
        tables = tuple(
            (xs[i],) * prod(len(a) for a in feedbacks[:i]) for i in range(len(inputs)))
        out.append(CodeFunction(node, inputs, feedbacks, tables))
    return out


# -- the channel --------------------------------------------------------------

KernelRow = dict  # {output tuple over nodes: probability}


class BlockChannel:
    """K-node channel over one block, stored as causal per-time kernel rows.

    ``kernels[i]`` maps ``(x_hist, y_hist)`` to a row over the joint output
    tuple at time i+1, where ``x_hist`` collects the input tuples of times
    1..i+1 and ``y_hist`` the output tuples of times 1..i.  Rows need only
    exist for reachable histories.
    """

    def __init__(self, nodes: Sequence[NodeSpec], kernels: Sequence[dict], *,
                 noise_block: JointBlockDistribution | None = None):
        nodes = tuple(nodes)
        if not nodes:
            raise ShapeError("channel needs at least one node")
        L = nodes[0].L
        if any(n.L != L for n in nodes):
            raise ShapeError("nodes disagree on block length")
        if len(kernels) != L:
            raise ShapeError(f"expected {L} kernels, got {len(kernels)}")
        if any(n.node != k + 1 for k, n in enumerate(nodes)):
            raise ShapeError("nodes must be numbered 1..K in order")
        self.nodes = nodes
        self.L = L
        self.kernels = tuple(dict(k) for k in kernels)
        self.noise_block = noise_block
        self._validate()

    @property
    def K(self) -> int:
        return len(self.nodes)

    def input_alphabet(self, k: int, i: int) -> tuple:
        return self.nodes[k - 1].inputs[i - 1]

    def output_alphabet(self, k: int, i: int) -> tuple:
        return self.nodes[k - 1].outputs[i - 1]

    def input_combos(self, i: int) -> list[tuple]:
        return list(itertools.product(*(n.inputs[i - 1] for n in self.nodes)))

    def output_combos(self, i: int) -> list[tuple]:
        return list(itertools.product(*(n.outputs[i - 1] for n in self.nodes)))

    def _validate(self):
        for i, kernel in enumerate(self.kernels, start=1):
            combos = set(self.output_combos(i))
            for (x_hist, y_hist), row in kernel.items():
                if len(x_hist) != i or len(y_hist) != i - 1:
                    raise ShapeError(
                        f"kernel {i}: history ({len(x_hist)}, {len(y_hist)}) "
                        f"has the wrong depth")
                total = 0.0
                for y, p in row.items():
                    if y not in combos:
                        raise ShapeError(f"kernel {i}: output {y!r} not in alphabets")
                    if p < -PROB_TOL:
                        raise InvalidDistributionError(f"kernel {i}: negative weight")
                    total += p
                if abs(total - 1.0) > PROB_TOL:
                    raise InvalidDistributionError(
                        f"kernel {i}: row for {(x_hist, y_hist)!r} sums to {total!r}")

    def is_deterministic(self, tol: float = PROB_TOL) -> bool:
        return all(max(row.values()) >= 1.0 - tol
                   for kernel in self.kernels for row in kernel.values())

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_noise(cls, nodes: Sequence[NodeSpec], noise: FiniteDistribution,
                   emit: Callable, *,
                   noise_block: JointBlockDistribution | None = None) -> "BlockChannel":
        """Compile functional form Y_{k,i} = emit(k, i, x^i, z) into kernels."""
        nodes = tuple(nodes)
        L = nodes[0].L
        K = len(nodes)
        kernels: list[dict] = [dict() for _ in range(L)]
        per_time_inputs = [list(itertools.product(*(n.inputs[i] for n in nodes)))
                           for i in range(L)]
        for x_full in itertools.product(*per_time_inputs):
            rows: list[dict] = [dict() for _ in range(L)]
            for z, pz in noise.items():
                if pz <= 0.0:
                    continue
                y_seq = tuple(
                    tuple(emit(k + 1, i + 1, x_full[:i + 1], z) for k in range(K))
                    for i in range(L))
                for i in range(L):
                    key = (x_full[:i + 1], y_seq[:i])
                    bucket = rows[i].setdefault(key, {})
                    bucket[y_seq[i]] = bucket.get(y_seq[i], 0.0) + pz
            for i in range(L):
                for key, bucket in rows[i].items():
                    if key in kernels[i]:
                        continue
                    total = sum(bucket.values())
                    kernels[i][key] = {y: p / total for y, p in bucket.items()}
        return cls(nodes, kernels, noise_block=noise_block)

    @classmethod
    def additive(cls, nodes: Sequence[NodeSpec], noise: FiniteDistribution,
                 signal: Callable, letter: Callable,
                 add: Callable = lambda a, b: a ^ b) -> "BlockChannel":
        """Additive form Y_{k,i} = signal(k, i, x^i) + letter(k, i, z).

        The per-letter noise block is retained so the maximum-entropy
        relaxation of the cut bound can subtract its causal entropy.
        """
        nodes = tuple(nodes)
        L = nodes[0].L
        K = len(nodes)

        def emit(k, i, x_hist, z):
            alphabet = nodes[k - 1].outputs[i - 1]
            if len(alphabet) == 1:
                return alphabet[0]
            return add(signal(k, i, x_hist), letter(k, i, z))

        variables = []
        for k in range(1, K + 1):
            for i in range(1, L + 1):
                alphabet = nodes[k - 1].outputs[i - 1]
                variables.append(Variable(f"N{k}:{i}", alphabet, node=k, time=i,
                                          kind="noise"))
        table = np.zeros(tuple(len(v.alphabet) for v in variables))
        for z, pz in noise.items():
            idx = []
            for k in range(1, K + 1):
                for i in range(1, L + 1):
                    alphabet = nodes[k - 1].outputs[i - 1]
                    lab = alphabet[0] if len(alphabet) == 1 else letter(k, i, z)
                    idx.append(alphabet.index(lab))
            table[tuple(idx)] += pz
        block = JointBlockDistribution(variables, table)
        return cls.from_noise(nodes, noise, emit, noise_block=block)


# -- rollouts and joint laws ---------------------------------------------------

def _own_history(y_path: tuple, k: int) -> tuple:
    return tuple(step[k] for step in y_path)


def rollout(ch: BlockChannel, cfs: Sequence[CodeFunction]):
    """Yield (y_path, x_path, prob) over output paths with positive probability.

    Inputs are pinned per time by the code functions applied to each node's
    own output history.
    """
    if len(cfs) != ch.K:
        raise ShapeError(f"need {ch.K} code functions, got {len(cfs)}")

    def rec(i, x_path, y_path, p):
        if i == ch.L:
            yield y_path, x_path, p
            return
        x_i = tuple(cfs[k].apply(i + 1, _own_history(y_path, k))
                    for k in range(ch.K))
        x_new = x_path + (x_i,)
        row = ch.kernels[i].get((x_new, y_path))
        if row is None:
            raise ShapeError(
                f"kernel {i + 1} has no row for history {(x_new, y_path)!r}")
        for y_i, w in row.items():
            if w > 0.0:
                yield from rec(i + 1, x_new, y_path + (y_i,), p * w)

    yield from rec(0, (), (), 1.0)


def induced_channel(ch: BlockChannel, cfs: Sequence[CodeFunction]) -> dict:
    """P(y_K^L | a_K^L): output-path law under a tuple of code functions."""
    law: dict = {}
    for y_path, _x, p in rollout(ch, cfs):
        law[y_path] = law.get(y_path, 0.0) + p
    return law


class CodeFunctionDistribution:
    """A joint distribution over tuples of code functions, one space per node."""

    def __init__(self, spaces: Sequence[Sequence[CodeFunction]], probs: np.ndarray,
                 *, product_form: bool = False):
        self.spaces = tuple(tuple(s) for s in spaces)
        probs = np.asarray(probs, dtype=float)
        shape = tuple(len(s) for s in self.spaces)
        if probs.shape != shape:
            raise InvalidDistributionError(
                f"probs shape {probs.shape} does not match spaces {shape}")
        if (probs < -PROB_TOL).any() or abs(probs.sum() - 1.0) > PROB_TOL:
            raise InvalidDistributionError("code-function weights are not a distribution")
        self.probs = np.clip(probs, 0.0, None)
        self.probs.setflags(write=False)
        self.product_form = bool(product_form)
        if self.product_form:
            outer = np.ones(())
            for k in range(len(self.spaces)):
                outer = np.multiply.outer(outer, self.marginal(k + 1))
            if np.abs(outer - self.probs).max() > PROB_TOL:
                raise InvalidDistributionError(
                    "product-form flag set but the joint does not factorize")

    @property
    def K(self) -> int:
        return len(self.spaces)

    def marginal(self, k: int) -> np.ndarray:
        axes = tuple(i for i in range(self.K) if i != k - 1)
        return self.probs.sum(axis=axes) if axes else self.probs

    @classmethod
    def independent(cls, spaces, marginals) -> "CodeFunctionDistribution":
        table = np.ones(())
        for m in marginals:
            table = np.multiply.outer(table, np.asarray(m, dtype=float))
        return cls(spaces, table, product_form=True)

    @classmethod
    def uniform(cls, spaces) -> "CodeFunctionDistribution":
        return cls.independent(spaces,
                               [np.full(len(s), 1.0 / len(s)) for s in spaces])

    @classmethod
    def point_mass(cls, spaces, index: Sequence[int]) -> "CodeFunctionDistribution":
        shape = tuple(len(s) for s in spaces)
        table = np.zeros(shape)
        table[tuple(index)] = 1.0
        return cls(spaces, table, product_form=True)

    def mix(self, other: "CodeFunctionDistribution", lam: float) -> "CodeFunctionDistribution":
        if self.spaces != other.spaces:
            raise InvalidDistributionError("cannot mix distributions over different spaces")
        return CodeFunctionDistribution(
            self.spaces, lam * self.probs + (1.0 - lam) * other.probs)


def _component_alphabets(space: Sequence[CodeFunction], L: int) -> list[tuple]:
    """Per-time component alphabets, ordered by first appearance in the space."""
    out = []
    for i in range(1, L + 1):
        seen: dict = {}
        for cf in space:
            seen.setdefault(cf.component(i), None)
        out.append(tuple(seen.keys()))
    return out


def joint_distribution(pa: CodeFunctionDistribution, ch: BlockChannel, *,
                       max_cells: int = 10_000_000) -> JointBlockDistribution:
    """The block joint over code functions, inputs, and outputs.

    Factorizes as P(a) * [prod_k 1(x_k^L || a_k^L, 0y_k^{L-1})] * P(y_K^L || x_K^L);
    code functions enter as per-time component variables so causally
    conditioned quantities can address tree prefixes.
    """
    if pa.K != ch.K:
        raise ShapeError("code-function distribution and channel disagree on K")
    K, L = ch.K, ch.L
    comp_alpha = [_component_alphabets(pa.spaces[k], L) for k in range(K)]
    variables: list[Variable] = []
    for k in range(K):
        for i in range(1, L + 1):
            variables.append(Variable(f"A{k + 1}:{i}", comp_alpha[k][i - 1],
                                      node=k + 1, time=i, kind="code"))
    for k in range(K):
        for i in range(1, L + 1):
            variables.append(Variable(f"X{k + 1}:{i}", ch.input_alphabet(k + 1, i),
                                      node=k + 1, time=i, kind="input"))
    for k in range(K):
        for i in range(1, L + 1):
            variables.append(Variable(f"Y{k + 1}:{i}", ch.output_alphabet(k + 1, i),
                                      node=k + 1, time=i, kind="output"))
    shape = tuple(len(v.alphabet) for v in variables)
    cells = prod(shape)
    if cells > max_cells:
        raise SizeError(f"joint would need {cells} cells (cap {max_cells})")
    comp_index = [[{c: j for j, c in enumerate(comp_alpha[k][i])}
                   for i in range(L)] for k in range(K)]
    x_index = [[{x: j for j, x in enumerate(ch.input_alphabet(k + 1, i + 1))}
                for i in range(L)] for k in range(K)]
    y_index = [[{y: j for j, y in enumerate(ch.output_alphabet(k + 1, i + 1))}
                for i in range(L)] for k in range(K)]

    table = np.zeros(shape)
    for tuple_idx in itertools.product(*(range(len(s)) for s in pa.spaces)):
        w = float(pa.probs[tuple_idx])
        if w <= 0.0:
            continue
        cfs = [pa.spaces[k][tuple_idx[k]] for k in range(K)]
        a_part = tuple(comp_index[k][i][cfs[k].component(i + 1)]
                       for k in range(K) for i in range(L))
        for y_path, x_path, p in rollout(ch, cfs):
            x_part = tuple(x_index[k][i][x_path[i][k]]
                           for k in range(K) for i in range(L))
            y_part = tuple(y_index[k][i][y_path[i][k]]
                           for k in range(K) for i in range(L))
            table[a_part + x_part + y_part] += w * p
    return JointBlockDistribution(variables, table,
                                  meta={"channel": ch, "pa": pa, "L": L})
