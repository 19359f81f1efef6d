"""Exact finite-probability engine over labeled, time-indexed product alphabets.

All distributions are dense tables in double precision. Entropies are in bits
(base-2 logarithm, 0*log 0 = 0). Blocks of variables are time-ordered groups,
which is what the causally conditioned quantities operate on:

    H(X^L || Y^L)      = sum_i H(X_i | X^{i-1}, Y^i)
    H(X^L || Y^L | A)  = sum_i H(X_i | X^{i-1}, Y^i, A)
    I(X^L -> Y^L || Z^L | A) = H(Y^L || Z^L | A) - H(Y^L || (X,Z)^L | A)

where each "letter" X_i may itself be a group of variables and the pair
(X,Z)^L is merged per time.  The shifted form 0y^{L-1} (conditioning sequence
delayed by one letter, first entry constant) is selected with ``delay=True``.

Everything here is immutable after construction and all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidDistributionError, SizeError

PROB_TOL = 1e-9
MAX_CELLS = 10_000_000

Block = Sequence[str]
Blocks = Sequence[Block]


def entropy_of_probs(p: np.ndarray) -> float:
    """Shannon entropy in bits of a weight vector; zero cells are skipped."""
    p = np.asarray(p, dtype=float).ravel()
    mask = p > 0.0
    if not mask.any():
        return 0.0
    q = p[mask]
    return float(-(q * np.log2(q)).sum())


def binary_entropy(eps: float) -> float:
    """H2(eps) in bits."""
    return entropy_of_probs(np.array([eps, 1.0 - eps]))


@dataclass(frozen=True)
class FiniteDistribution:
    """A distribution over an ordered list of labels.

    Weights must be nonnegative and sum to one within ``PROB_TOL``.
    """

    support: tuple
    probs: tuple

    def __post_init__(self):
        if len(self.support) != len(self.probs):
            raise InvalidDistributionError("support and probs lengths differ")
        if len(set(self.support)) != len(self.support):
            raise InvalidDistributionError("duplicate labels in support")
        p = np.asarray(self.probs, dtype=float)
        if (p < -PROB_TOL).any():
            raise InvalidDistributionError("negative probability weight")
        total = float(p.sum())
        if abs(total - 1.0) > PROB_TOL:
            raise InvalidDistributionError(f"weights sum to {total!r}, not 1")

    @classmethod
    def uniform(cls, labels: Iterable) -> "FiniteDistribution":
        labels = tuple(labels)
        return cls(labels, tuple(1.0 / len(labels) for _ in labels))

    @classmethod
    def point_mass(cls, label, labels: Iterable | None = None) -> "FiniteDistribution":
        labels = tuple(labels) if labels is not None else (label,)
        return cls(labels, tuple(1.0 if x == label else 0.0 for x in labels))

    @classmethod
    def from_pairs(cls, pairs) -> "FiniteDistribution":
        pairs = list(pairs)
        return cls(tuple(k for k, _ in pairs), tuple(float(v) for _, v in pairs))

    def prob(self, label) -> float:
        return float(self.probs[self.support.index(label)])

    def items(self):
        return zip(self.support, self.probs)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    def entropy(self) -> float:
        return entropy_of_probs(self.as_array())


@dataclass(frozen=True)
class Variable:
    """A labeled coordinate of a joint table.

    ``node`` and ``time`` are optional tags used to slice network joints
    (time is 1-based); ``kind`` distinguishes code-function components,
    channel inputs/outputs, noise letters, and auxiliaries.
    """

    name: str
    alphabet: tuple
    node: int | None = None
    time: int | None = None
    kind: str = "generic"

    def __post_init__(self):
        if not self.alphabet:
            raise InvalidDistributionError(f"variable {self.name!r} has empty alphabet")


class JointBlockDistribution:
    """Dense joint probability table over a tuple of ``Variable`` coordinates."""

    def __init__(self, variables: Sequence[Variable], table: np.ndarray, *,
                 meta: dict | None = None):
        variables = tuple(variables)
        names = [v.name for v in variables]
        if len(set(names)) != len(names):
            raise InvalidDistributionError("duplicate variable names")
        table = np.asarray(table, dtype=float)
        expected = tuple(len(v.alphabet) for v in variables)
        if table.shape != expected:
            raise InvalidDistributionError(
                f"table shape {table.shape} does not match alphabets {expected}")
        if table.size > MAX_CELLS:
            raise SizeError(f"joint table has {table.size} cells (cap {MAX_CELLS})")
        if (table < -1e-12).any():
            raise InvalidDistributionError("negative cell in joint table")
        total = float(table.sum())
        if abs(total - 1.0) > PROB_TOL:
            raise InvalidDistributionError(f"joint table sums to {total!r}, not 1")
        self.variables = variables
        self.table = np.clip(table, 0.0, None)
        self.table.setflags(write=False)
        self.meta = dict(meta) if meta else {}
        self._index = {v.name: i for i, v in enumerate(variables)}
        self._entropy_cache: dict[frozenset, float] = {}

    # -- lookup ------------------------------------------------------------

    def axis(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def variable(self, name: str) -> Variable:
        return self.variables[self.axis(name)]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def select(self, kind: str | None = None, nodes: Iterable[int] | None = None,
               times: Iterable[int] | None = None) -> tuple[str, ...]:
        """Names of variables matching the given tags, in table order."""
        nodes = set(nodes) if nodes is not None else None
        times = set(times) if times is not None else None
        out = []
        for v in self.variables:
            if kind is not None and v.kind != kind:
                continue
            if nodes is not None and v.node not in nodes:
                continue
            if times is not None and v.time not in times:
                continue
            out.append(v.name)
        return tuple(out)

    @property
    def horizon(self) -> int:
        """Largest time tag present (the block length of a network joint)."""
        times = [v.time for v in self.variables if v.time is not None]
        return max(times) if times else 0

    # -- core operations ----------------------------------------------------

    def marginal(self, names: Iterable[str]) -> "JointBlockDistribution":
        keep = sorted({self.axis(n) for n in names})
        drop = tuple(i for i in range(len(self.variables)) if i not in keep)
        table = self.table.sum(axis=drop) if drop else self.table
        return JointBlockDistribution([self.variables[i] for i in keep], table)

    def entropy(self, names: Iterable[str] | None = None) -> float:
        if names is None:
            axes = frozenset(range(len(self.variables)))
        else:
            axes = frozenset(self.axis(n) for n in names)
        cached = self._entropy_cache.get(axes)
        if cached is not None:
            return cached
        if not axes:
            value = 0.0
        else:
            drop = tuple(i for i in range(len(self.variables)) if i not in axes)
            table = self.table.sum(axis=drop) if drop else self.table
            value = entropy_of_probs(table)
        self._entropy_cache[axes] = value
        return value

    def extend(self, var: Variable, kernel: np.ndarray,
               given: Sequence[str]) -> "JointBlockDistribution":
        """Attach a new variable drawn from ``kernel`` conditioned on ``given``.

        ``kernel`` has one axis per conditioning variable (in the order of
        ``given``) plus a final axis over the new variable's alphabet; each
        row must sum to one.
        """
        kernel = np.asarray(kernel, dtype=float)
        axes = [self.axis(n) for n in given]
        want = tuple(len(self.variables[a].alphabet) for a in axes) + (len(var.alphabet),)
        if kernel.shape != want:
            raise InvalidDistributionError(
                f"kernel shape {kernel.shape} does not match {want}")
        rows = kernel.reshape(-1, len(var.alphabet)).sum(axis=1)
        if np.abs(rows - 1.0).max() > PROB_TOL:
            raise InvalidDistributionError("kernel rows must sum to 1")
        # Broadcast the kernel into the table's axis order, new axis last.
        order = np.argsort(axes)
        kernel_sorted = np.transpose(kernel, tuple(order) + (len(axes),))
        shape = [1] * len(self.variables) + [len(var.alphabet)]
        for a in axes:
            shape[a] = self.table.shape[a]
        table = self.table[..., None] * kernel_sorted.reshape(shape)
        return JointBlockDistribution(list(self.variables) + [var], table,
                                      meta=self.meta)


def mixture(var: Variable, weights: Sequence[float],
            components: Sequence[JointBlockDistribution]) -> JointBlockDistribution:
    """Joint over (var, ...) from per-label component joints: P(v) * P(rest | v)."""
    if len(weights) != len(var.alphabet) or len(components) != len(var.alphabet):
        raise InvalidDistributionError("mixture arity does not match alphabet")
    head = components[0].variables
    for c in components[1:]:
        if c.variables != head:
            raise InvalidDistributionError("mixture components disagree on variables")
    w = np.asarray(weights, dtype=float)
    if (w < -PROB_TOL).any() or abs(w.sum() - 1.0) > PROB_TOL:
        raise InvalidDistributionError("mixture weights must form a distribution")
    table = np.stack([wi * c.table for wi, c in zip(w, components)], axis=0)
    return JointBlockDistribution([var] + list(components[0].variables), table,
                                  meta=components[0].meta)


# -- block helpers ----------------------------------------------------------

def delayed(blocks: Blocks) -> list[list[str]]:
    """Shift a block sequence by one time step: (0, b_1, ..., b_{L-1})."""
    blocks = [list(b) for b in blocks]
    return [[]] + blocks[:-1]


def merge_blocks(*blockss: Blocks) -> list[list[str]]:
    """Per-time union of several block sequences (the comma convention)."""
    length = max((len(b) for b in blockss), default=0)
    out: list[list[str]] = [[] for _ in range(length)]
    for blocks in blockss:
        if blocks and len(blocks) != length:
            raise ValueError("block sequences have mismatched lengths")
        for i, b in enumerate(blocks):
            out[i].extend(b)
    return out


def _flatten(blocks: Blocks) -> list[str]:
    return [name for b in blocks for name in b]


def conditional_entropy(d: JointBlockDistribution, target: Iterable[str],
                        given: Iterable[str] = ()) -> float:
    """H(target | given) in bits; 0/0 conditionals are skipped cells."""
    target = list(target)
    given = list(given)
    return d.entropy(target + given) - d.entropy(given)


def mutual_information(d: JointBlockDistribution, a: Iterable[str],
                       b: Iterable[str], given: Iterable[str] = ()) -> float:
    """I(a ; b | given) in bits."""
    a, b, g = list(a), list(b), list(given)
    return (d.entropy(a + g) + d.entropy(b + g)
            - d.entropy(a + b + g) - d.entropy(g))


def entropy(d: JointBlockDistribution, names: Iterable[str] | None = None) -> float:
    """Entropy of the marginal on ``names`` (all variables when omitted)."""
    return d.entropy(names)


def causally_conditioned_entropy(d: JointBlockDistribution, target: Blocks,
                                 cond: Blocks | None = None,
                                 given: Iterable[str] = (), *,
                                 delay: bool = False) -> float:
    """H(target^L || cond^L | given), with ``delay`` selecting the 0y^{L-1} form."""
    target = [list(b) for b in target]
    if cond is None:
        cond = [[] for _ in target]
    cond = [list(b) for b in cond]
    if len(cond) != len(target):
        raise ValueError(
            f"mismatched block lengths: {len(target)} target vs {len(cond)} conditioning")
    if delay:
        cond = delayed(cond)
    given = list(given)
    total = 0.0
    for i in range(len(target)):
        past = _flatten(target[:i])
        seen = _flatten(cond[:i + 1])
        total += conditional_entropy(d, target[i], past + seen + given)
    return total


def directed_information(d: JointBlockDistribution, source: Blocks, target: Blocks,
                         causal: Blocks | None = None,
                         given: Iterable[str] = ()) -> float:
    """I(source^L -> target^L || causal^L | given) in bits."""
    source = [list(b) for b in source]
    if len(source) != len(target):
        raise ValueError(
            f"mismatched block lengths: {len(source)} source vs {len(target)} target")
    base = causally_conditioned_entropy(d, target, causal, given)
    merged = merge_blocks(source, causal) if causal is not None else source
    return base - causally_conditioned_entropy(d, target, merged, given)
