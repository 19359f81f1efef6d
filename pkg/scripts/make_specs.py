#!/usr/bin/env python3
"""Regenerate the JSON spec files shipped under specs/."""

import json
from pathlib import Path

import numpy as np

from inblock import catalog
from inblock.model import SILENT, BlockChannel, Message, NetworkSession, NodeSpec
from inblock.probability import FiniteDistribution
from inblock.specio import channel_to_spec, gaussian_to_spec

OUT = Path(__file__).resolve().parent.parent / "specs"


def adder_mac_network() -> tuple[BlockChannel, NetworkSession]:
    """Binary adder MAC as a three-node network with the sum fed back to all."""
    y = (0, 1, 2)
    nodes = (
        NodeSpec(1, ((0, 1),), (y,)),
        NodeSpec(2, ((0, 1),), (y,)),
        NodeSpec(3, (SILENT,), (y,)),
    )
    noise = FiniteDistribution((0,), (1.0,))

    def emit(k, i, x_hist, z):
        return x_hist[0][0] + x_hist[0][1]

    ch = BlockChannel.from_noise(nodes, noise, emit)
    session = NetworkSession(3, [Message("w1", 1, frozenset({3})),
                                 Message("w2", 2, frozenset({3}))])
    return ch, session


def deterministic_bc() -> tuple[BlockChannel, NetworkSession]:
    """Two-letter noise-free broadcast: receivers see causal functions of X."""
    nodes = (
        NodeSpec(1, ((0, 1), (0, 1)), (SILENT, SILENT)),
        NodeSpec(2, (SILENT, SILENT), ((0, 1), (0, 1))),
        NodeSpec(3, (SILENT, SILENT), (SILENT, (0, 1))),
    )
    noise = FiniteDistribution((0,), (1.0,))

    def emit(k, i, x_hist, z):
        x1 = x_hist[0][0]
        if k == 2:
            return x1 if i == 1 else x1 & x_hist[1][0]
        if k == 3 and i == 2:
            return x1 ^ x_hist[1][0]
        return SILENT[0]

    ch = BlockChannel.from_noise(nodes, noise, emit)
    session = NetworkSession(3, [Message("w1", 1, frozenset({2})),
                                 Message("w2", 1, frozenset({3}))])
    return ch, session


def qf_line_network() -> tuple[BlockChannel, NetworkSession]:
    """Deterministic two-hop line: node 2 repeats node 1's bit to node 3."""
    nodes = (
        NodeSpec(1, ((0, 1), SILENT), (SILENT, SILENT)),
        NodeSpec(2, (SILENT, (0, 1)), ((0, 1), SILENT)),
        NodeSpec(3, (SILENT, SILENT), (SILENT, (0, 1))),
    )
    noise = FiniteDistribution((0,), (1.0,))

    def emit(k, i, x_hist, z):
        if k == 2 and i == 1:
            return x_hist[0][0]
        if k == 3 and i == 2:
            return x_hist[1][1]
        return SILENT[0]

    ch = BlockChannel.from_noise(nodes, noise, emit)
    session = NetworkSession(3, [Message("w", 1, frozenset({3}))])
    return ch, session


def binary_feedback_functional(eps: float) -> dict:
    """The binary feedback channel in the functional (noise + maps) form."""
    doc = {
        "K": 2, "L": 2,
        "nodes": [
            {"inputs": [["0", "1"], ["0", "1"]],
             "outputs": [["0", "1"], ["0"]]},
            {"inputs": [["0"], ["0"]],
             "outputs": [["0", "1"], ["0", "1"]]},
        ],
        "channel": {"functional": {
            "noise": {"labels": ["0", "1"], "probs": [1.0 - eps, eps]},
            "maps": [{}, {}],
        }},
        "messages": [{"name": "w", "source": 1, "sinks": [2]}],
    }
    t1 = {"1": {}, "2": {}}
    for x1 in "01":
        for x2n in "01":
            for z in "01":
                t1["1"][f"{x1},{x2n}|{z}"] = z
                t1["2"][f"{x1},{x2n}|{z}"] = x1
    t2 = {"2": {}}
    for x1 in "01":
        for x12 in "01":
            for z in "01":
                key = f"{x1},0;{x12},0|{z}"
                t2["2"][key] = str(int(x12) ^ int(z))
    doc["channel"]["functional"]["maps"] = [t1, t2]
    return doc


def main():
    OUT.mkdir(exist_ok=True)

    doc = binary_feedback_functional(0.25)
    (OUT / "binary_feedback.json").write_text(json.dumps(doc, indent=1))

    ch = catalog.state_addition_channel()
    doc = channel_to_spec(ch, NetworkSession(2, [Message("w", 1, frozenset({2}))]))
    (OUT / "state_addition.json").write_text(json.dumps(doc, indent=1))

    ch, session = catalog.two_way_feedback_channel(0.2)
    doc = channel_to_spec(ch, session)
    (OUT / "two_way_feedback.json").write_text(json.dumps(doc, indent=1))

    ch, session = adder_mac_network()
    (OUT / "adder_mac.json").write_text(json.dumps(channel_to_spec(ch, session), indent=1))

    ch, session = deterministic_bc()
    (OUT / "bc_deterministic.json").write_text(json.dumps(channel_to_spec(ch, session), indent=1))

    ch, session = qf_line_network()
    (OUT / "qf_line.json").write_text(json.dumps(channel_to_spec(ch, session), indent=1))

    net = catalog.gaussian_link(gain=2.0, power=1.0)
    (OUT / "gaussian_link.json").write_text(json.dumps(gaussian_to_spec(net), indent=1))

    ch, session = catalog.causal_relay_counterexample()
    (OUT / "causal_relay.json").write_text(json.dumps(channel_to_spec(ch, session), indent=1))
    print("wrote", len(list(OUT.glob("*.json"))), "spec files to", OUT)


if __name__ == "__main__":
    main()
