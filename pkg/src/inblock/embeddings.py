"""Canonical two-letter (and block-fading) embeddings of classic channels.

Each construction returns a ``BlockChannel`` whose silent slots carry the
singleton alphabet, so code-tree enumeration, cut bounds, and the capacity
optimizer apply unchanged:

* state known causally at the encoder  -> L=2, the state arrives as the
  transmitter's first-letter feedback output;
* action-dependent state               -> L=2, the first-letter input is the
  action, the state comes back as feedback;
* relay without delay                  -> L=2, K=3, each node uses at most one
  input and one output slot per block;
* block fading                         -> state drawn once per block,
  conditionally memoryless within it.
"""

from __future__ import annotations

import itertools
from typing import Mapping

from .model import SILENT, BlockChannel, NodeSpec, sorted_alphabet
from .optimize import blahut_arimoto
from .probability import FiniteDistribution

import numpy as np


def _row(mapping: Mapping, wrap) -> dict:
    return {wrap(y): float(p) for y, p in mapping.items() if float(p) > 0.0}


def embed_state_channel(state: FiniteDistribution,
                        transition: Mapping) -> BlockChannel:
    """Two-letter channel for state revealed causally to the encoder.

    ``transition`` maps (x, s) to a row over y.  Time 1 emits the state as
    the transmitter's feedback output; time 2 applies the state kernel to the
    second-letter input.
    """
    xs = sorted_alphabet({x for x, _s in transition})
    ys = sorted_alphabet({y for row in transition.values() for y in row})
    ss = tuple(state.support)
    nodes = (
        NodeSpec(1, (SILENT, xs), (ss, SILENT)),
        NodeSpec(2, (SILENT, SILENT), (SILENT, ys)),
    )
    silent = SILENT[0]
    x0 = (silent, silent)
    k1 = {((x0,), ()): {(s, silent): p for s, p in state.items() if p > 0.0}}
    k2 = {}
    for x in xs:
        for s in ss:
            key = ((x0, (x, silent)), ((s, silent),))
            k2[key] = _row(transition[(x, s)], lambda y: (silent, y))
    return BlockChannel(nodes, [k1, k2])


def embed_action_channel(actions, state_kernel: Mapping,
                         output_kernel: Mapping) -> BlockChannel:
    """Two-letter channel for action-dependent state.

    ``state_kernel`` maps action b to a row over states; ``output_kernel``
    maps (x, s, b) to a row over y.  Time 1 input is the action with the state
    as feedback output; time 2 input is x with receiver output y.
    """
    bs = sorted_alphabet(actions)
    ss = sorted_alphabet({s for row in state_kernel.values() for s in row})
    xs = sorted_alphabet({x for x, _s, _b in output_kernel})
    ys = sorted_alphabet({y for row in output_kernel.values() for y in row})
    nodes = (
        NodeSpec(1, (bs, xs), (ss, SILENT)),
        NodeSpec(2, (SILENT, SILENT), (SILENT, ys)),
    )
    silent = SILENT[0]
    k1 = {}
    k2 = {}
    for b in bs:
        k1[(((b, silent),), ())] = _row(state_kernel[b], lambda s: (s, silent))
        for s in ss:
            if float(state_kernel[b].get(s, 0.0)) <= 0.0:
                continue
            for x in xs:
                key = (((b, silent), (x, silent)), ((s, silent),))
                k2[key] = _row(output_kernel[(x, s, b)], lambda y: (silent, y))
    return BlockChannel(nodes, [k1, k2])


def embed_relay_without_delay(relay_obs: Mapping,
                              dest_kernel: Mapping) -> BlockChannel:
    """Three-node, two-letter channel for a relay acting without delay.

    ``relay_obs`` maps x1 to a row over y2; ``dest_kernel`` maps (x1, x2, y2)
    to a row over y3.  The source sends at time 1, the relay observes at
    time 1 and sends at time 2, the destination observes at time 2; all other
    slots are silent.
    """
    x1s = sorted_alphabet(relay_obs)
    y2s = sorted_alphabet({y for row in relay_obs.values() for y in row})
    x2s = sorted_alphabet({x2 for _x1, x2, _y2 in dest_kernel})
    y3s = sorted_alphabet({y for row in dest_kernel.values() for y in row})
    nodes = (
        NodeSpec(1, (x1s, SILENT), (SILENT, SILENT)),
        NodeSpec(2, (SILENT, x2s), (y2s, SILENT)),
        NodeSpec(3, (SILENT, SILENT), (SILENT, y3s)),
    )
    silent = SILENT[0]
    k1 = {}
    k2 = {}
    for x1 in x1s:
        x_t1 = (x1, silent, silent)
        k1[((x_t1,), ())] = _row(relay_obs[x1], lambda y2: (silent, y2, silent))
        for y2 in y2s:
            if float(relay_obs[x1].get(y2, 0.0)) <= 0.0:
                continue
            for x2 in x2s:
                key = ((x_t1, (silent, x2, silent)), ((silent, y2, silent),))
                k2[key] = _row(dest_kernel[(x1, x2, y2)],
                               lambda y3: (silent, silent, y3))
    return BlockChannel(nodes, [k1, k2])


def embed_block_fading(state: FiniteDistribution, per_letter: Mapping,
                       L: int) -> BlockChannel:
    """Point-to-point block-fading channel: one state draw per block.

    ``per_letter`` maps (x, s) to a row over (feedback, output) pairs; within
    a block the channel is conditionally memoryless given the state, which is
    marginalized into causal kernels through the state posterior implied by
    the observed history.
    """
    xs = sorted_alphabet({x for x, _s in per_letter})
    fb = sorted_alphabet({t for row in per_letter.values() for t, _y in row})
    ys = sorted_alphabet({y for row in per_letter.values() for _t, y in row})
    nodes = (
        NodeSpec(1, (xs,) * L, (fb,) * L),
        NodeSpec(2, (SILENT,) * L, (ys,) * L),
    )
    silent = SILENT[0]

    def letter_prob(x, s, t, y):
        return float(per_letter[(x, s)].get((t, y), 0.0))

    in_combos = list(itertools.product(xs, SILENT))
    out_combos = list(itertools.product(fb, ys))
    kernels = []
    for i in range(1, L + 1):
        kernel = {}
        for x_hist in itertools.product(in_combos, repeat=i):
            for y_hist in itertools.product(out_combos, repeat=i - 1):
                posterior = []
                for s, ps in state.items():
                    w = float(ps)
                    for j in range(i - 1):
                        w *= letter_prob(x_hist[j][0], s, *y_hist[j])
                    posterior.append((s, w))
                total = sum(w for _s, w in posterior)
                if total <= 0.0:
                    continue
                row = {}
                for t in fb:
                    for y in ys:
                        p = sum(w * letter_prob(x_hist[i - 1][0], s, t, y)
                                for s, w in posterior) / total
                        if p > 0.0:
                            row[(t, y)] = p
                kernel[(x_hist, y_hist)] = row
        kernels.append(kernel)
    return BlockChannel(nodes, kernels)


def state_genie_bound(state: FiniteDistribution, transition: Mapping) -> float:
    """Upper bound from revealing the state to the receiver, bits per use.

    max over P(x|s) of I(X;Y|S) splits over states into independent capacity
    problems; the two-letter embedding spreads the value over L=2 uses.
    """
    xs = sorted_alphabet({x for x, _s in transition})
    ys = sorted_alphabet({y for row in transition.values() for y in row})
    total = 0.0
    for s, ps in state.items():
        if ps <= 0.0:
            continue
        W = np.array([[float(transition[(x, s)].get(y, 0.0)) for y in ys]
                      for x in xs])
        value, _r, _i, _g = blahut_arimoto(W)
        total += float(ps) * value
    return total / 2.0
