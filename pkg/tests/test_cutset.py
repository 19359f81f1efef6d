"""Cut-bound tests.

Claims:
    - worked values: the integer-addition state channel gives 0.5 bits/use at
      the optimal two-tree law; constant-output channels give 0; the loose
      relaxation of the noise-leak channel evaluates to H2(e2)/2 at e1=1/2
    - the one-letter case recovers the classic cut expression against a
      first-principles oracle, under dependent tree laws
    - ordering chain: exact <= directed relaxation <= input-output relaxation
      on randomized channels and dependent laws (slack 1e-9)
    - additive and deterministic specializations agree with their definitions
    - split bound: partition checked; with no strictly causal nodes it
      coincides with the input-output relaxation; the three-letter
      counterexample evaluates to 1 bit per block on both of its cuts
    - cut enumeration skips message-free cuts unless asked, errors on K>16,
      and the two-user adder MAC yields exactly its three bounds
    - the exact cut value is concave in the code-function distribution
"""

import itertools

import numpy as np
import pytest

from inblock.catalog import (
    CAUSAL_RELAY_CAUSAL,
    CAUSAL_RELAY_STRICT,
    causal_relay_counterexample,
    noise_leak_channel,
    state_addition_channel,
    two_way_feedback_channel,
    two_way_optimal_pa,
)
from inblock.cutset import (
    baik_bound,
    cut_mutual_information,
    cutset_region,
    enumerate_cuts,
    weakened_bound,
)
from inblock.errors import ShapeError
from inblock.model import (
    SILENT,
    BlockChannel,
    CodeFunctionDistribution,
    Message,
    NetworkSession,
    NodeSpec,
    enumerate_code_functions,
    induced_channel,
    joint_distribution,
)
from inblock.optimize import receiver_code_function
from inblock.probability import FiniteDistribution, binary_entropy

from conftest import bf_classic_cut, channel_spaces, random_channel, random_pa


def state_channel_joint(weights):
    ch = state_addition_channel()
    trees = enumerate_code_functions(ch.nodes[0])
    rx = [receiver_code_function(ch, 2)]
    pa = CodeFunctionDistribution([trees, rx], np.asarray(weights).reshape(-1, 1))
    return joint_distribution(pa, ch)


class TestExactCut:
    def test_state_channel_optimum_is_half_bit(self):
        joint = state_channel_joint([0.0, 0.5, 0.5, 0.0])
        assert cut_mutual_information(joint, {1}) == pytest.approx(0.5, abs=1e-12)

    def test_constant_outputs_give_zero(self):
        nodes = (NodeSpec(1, ((0, 1),), (SILENT,)),
                 NodeSpec(2, (SILENT,), ((0,),)))
        kernel = {((((x, 0),), ())): {(0, 0): 1.0} for x in (0, 1)}
        ch = BlockChannel(nodes, [kernel])
        pa = CodeFunctionDistribution.uniform(channel_spaces(ch))
        joint = joint_distribution(pa, ch)
        assert cut_mutual_information(joint, {1}) == pytest.approx(0.0, abs=1e-12)

    def test_invalid_cuts_rejected(self):
        joint = state_channel_joint([0.25] * 4)
        for bad in (set(), {1, 2}, {3}):
            with pytest.raises(ShapeError):
                cut_mutual_information(joint, bad)

    def test_one_letter_recovers_classic_cut(self, rng):
        # dependent tree tuples at L=1 are exactly joint input laws
        for _ in range(20):
            ch = random_channel(rng, L=1)
            spaces = channel_spaces(ch)
            pa = random_pa(rng, spaces)
            joint = joint_distribution(pa, ch)
            K = ch.K
            px = {}
            W = {}
            for idx in itertools.product(*(range(len(s)) for s in spaces)):
                cfs = [spaces[k][idx[k]] for k in range(K)]
                x = tuple(cf.apply(1, ()) for cf in cfs)
                px[x] = px.get(x, 0.0) + float(pa.probs[idx])
                if x not in W:
                    W[x] = {}
                    for y_path, p in induced_channel(ch, cfs).items():
                        W[x][y_path[0]] = W[x].get(y_path[0], 0.0) + p
            for r in range(1, K):
                for S in itertools.combinations(range(K), r):
                    Sc = tuple(k for k in range(K) if k not in S)
                    Wcut = {x: {} for x in W}
                    for x, row in W.items():
                        for y, p in row.items():
                            key = tuple(y[k] for k in Sc)
                            Wcut[x][key] = Wcut[x].get(key, 0.0) + p
                    want = bf_classic_cut(px, Wcut, S, Sc)
                    got = cut_mutual_information(joint, {k + 1 for k in S})
                    assert got == pytest.approx(want, abs=1e-9)


class TestPointToPointJointIdentity:
    def test_tree_information_equals_directed_form(self, rng):
        # on two-node joints the plain and causally conditioned quantities
        # agree: I(A^L ; Y^L) = I(A^L -> Y^L) with Y the receiver outputs
        from inblock.catalog import binary_feedback_channel
        from inblock.probability import directed_information, mutual_information
        ch = binary_feedback_channel(0.3)
        spaces = channel_spaces(ch)
        for _ in range(10):
            pa = random_pa(rng, spaces)
            joint = joint_distribution(pa, ch)
            a_blocks = [[f"A1:{i}"] for i in (1, 2)]
            y_blocks = [[f"Y2:{i}"] for i in (1, 2)]
            plain = mutual_information(joint, [n for b in a_blocks for n in b],
                                       [n for b in y_blocks for n in b])
            causal = directed_information(joint, a_blocks, y_blocks)
            assert plain == pytest.approx(causal, abs=1e-9)


class TestWeakenedBounds:
    def test_ordering_chain_randomized(self, rng):
        for _ in range(60):
            ch = random_channel(rng)
            pa = random_pa(rng, channel_spaces(ch))
            joint = joint_distribution(pa, ch)
            K = ch.K
            for r in range(1, K):
                for S in itertools.combinations(range(1, K + 1), r):
                    exact = cut_mutual_information(joint, S)
                    directed = weakened_bound(joint, S, "directed-weakened")
                    relaxed = weakened_bound(joint, S, "input-output-weakened")
                    assert exact <= directed + 1e-9
                    assert directed <= relaxed + 1e-9

    def test_noise_leak_value_at_half(self):
        eps2 = 0.11
        ch = noise_leak_channel(0.5, eps2)
        pa = CodeFunctionDistribution.uniform(channel_spaces(ch))
        joint = joint_distribution(pa, ch)
        assert cut_mutual_information(joint, {1}) == pytest.approx(0.0, abs=1e-9)
        got = weakened_bound(joint, {1}, "input-output-weakened")
        assert got == pytest.approx(binary_entropy(eps2) / 2.0, abs=1e-9)

    def test_additive_specialization(self):
        # general (eps1, eps2): value is (1 + H2(e2) - H2(e1*e2))/2 at uniform
        eps1, eps2 = 0.3, 0.11
        ch = noise_leak_channel(eps1, eps2)
        pa = CodeFunctionDistribution.uniform(channel_spaces(ch))
        joint = joint_distribution(pa, ch)
        star = eps1 * (1 - eps2) + (1 - eps1) * eps2
        want = (1.0 + binary_entropy(eps2) - binary_entropy(star)) / 2.0
        got = weakened_bound(joint, {1}, "additive-noise")
        assert got == pytest.approx(want, abs=1e-9)
        relaxed = weakened_bound(joint, {1}, "input-output-weakened")
        assert got == pytest.approx(relaxed, abs=1e-9)

    def test_additive_requires_noise_block(self):
        joint = state_channel_joint([0.25] * 4)
        with pytest.raises(ShapeError):
            weakened_bound(joint, {1}, "additive-noise")

    def test_deterministic_specialization(self):
        nodes = (NodeSpec(1, ((0, 1), (0, 1)), (SILENT, SILENT)),
                 NodeSpec(2, (SILENT, SILENT), ((0, 1), (0, 1))))
        noise = FiniteDistribution((0,), (1.0,))
        ch = BlockChannel.from_noise(
            nodes, noise,
            lambda k, i, xh, z: xh[i - 1][0] if k == 2 else SILENT[0])
        pa = CodeFunctionDistribution.uniform(channel_spaces(ch))
        joint = joint_distribution(pa, ch)
        got = weakened_bound(joint, {1}, "deterministic")
        y = [[f"Y2:{i}"] for i in (1, 2)]
        from inblock.probability import causally_conditioned_entropy
        want = causally_conditioned_entropy(joint, y, [[], []]) / 2
        assert got == pytest.approx(want, abs=1e-12)

    def test_deterministic_requires_noise_free(self):
        joint = state_channel_joint([0.25] * 4)
        with pytest.raises(ShapeError):
            weakened_bound(joint, {1}, "deterministic")

    def test_unknown_kind_rejected(self):
        joint = state_channel_joint([0.25] * 4)
        with pytest.raises(ShapeError):
            weakened_bound(joint, {1}, "bogus")


class TestBaikBound:
    def test_counterexample_cuts_give_one_bit_per_block(self):
        ch, _session = causal_relay_counterexample()
        pa = CodeFunctionDistribution.uniform(channel_spaces(ch))
        joint = joint_distribution(pa, ch)
        for S in ({1}, {1, 2}):
            got = baik_bound(joint, S, CAUSAL_RELAY_CAUSAL, CAUSAL_RELAY_STRICT)
            assert got == pytest.approx(1.0 / 3.0, abs=1e-9)
        # the exact bound sees that nothing flows
        assert cut_mutual_information(joint, {1, 2}) == pytest.approx(0.0, abs=1e-9)

    def test_partition_validated(self):
        ch, _session = causal_relay_counterexample()
        pa = CodeFunctionDistribution.uniform(channel_spaces(ch))
        joint = joint_distribution(pa, ch)
        with pytest.raises(ShapeError):
            baik_bound(joint, {1}, {2, 3}, {1, 2})
        with pytest.raises(ShapeError):
            baik_bound(joint, {1}, {2}, {1})

    def test_one_letter_strictly_causal_matches_input_output(self, rng):
        # at L=1 the split bound with everything strictly causal has an empty
        # head and its tail term is exactly the input-output relaxation
        for _ in range(20):
            ch = random_channel(rng, L=1)
            pa = random_pa(rng, channel_spaces(ch))
            joint = joint_distribution(pa, ch)
            K = ch.K
            all_nodes = frozenset(range(1, K + 1))
            for r in range(1, K):
                for S in itertools.combinations(range(1, K + 1), r):
                    got = baik_bound(joint, S, frozenset(), all_nodes)
                    want = weakened_bound(joint, S, "input-output-weakened")
                    assert got == pytest.approx(want, abs=1e-9)

    def test_one_letter_all_causal_matches_exact(self, rng):
        # at L=1 keeping every node's tree in the conditioning recovers the
        # exact cut value (inputs are functions of the trees)
        for _ in range(10):
            ch = random_channel(rng, L=1)
            pa = random_pa(rng, channel_spaces(ch))
            joint = joint_distribution(pa, ch)
            K = ch.K
            all_nodes = frozenset(range(1, K + 1))
            for r in range(1, K):
                for S in itertools.combinations(range(1, K + 1), r):
                    got = baik_bound(joint, S, all_nodes, frozenset())
                    want = cut_mutual_information(joint, S)
                    assert got == pytest.approx(want, abs=1e-9)

    def test_upper_bounds_exact_on_counterexample_class(self, rng):
        # on the slot-structured counterexample the split bound stays above
        # the exact cut value at every law and partition choice
        ch, _session = causal_relay_counterexample()
        for _ in range(10):
            pa = random_pa(rng, channel_spaces(ch))
            joint = joint_distribution(pa, ch)
            for S in ({1}, {1, 2}, {1, 3}, {2}):
                exact = cut_mutual_information(joint, S)
                split = baik_bound(joint, S, CAUSAL_RELAY_CAUSAL,
                                   CAUSAL_RELAY_STRICT)
                assert split >= exact - 1e-9


class TestCutsetRegion:
    def test_two_way_channel_region(self):
        ch, session = two_way_feedback_channel(0.2)
        reports = cutset_region(session, ch, two_way_optimal_pa(ch))
        values = {tuple(sorted(r.cut)): r.bits_per_use for r in reports}
        assert values[(1,)] == pytest.approx((1 - binary_entropy(0.2)) / 2, abs=1e-9)
        assert values[(2,)] == pytest.approx(0.5, abs=1e-9)

    def test_full_feedback_adder_mac_three_bounds(self):
        # three-node adder with the sum echoed to both senders
        y = (0, 1, 2)
        nodes = (NodeSpec(1, ((0, 1),), (y,)),
                 NodeSpec(2, ((0, 1),), (y,)),
                 NodeSpec(3, (SILENT,), (y,)))
        noise = FiniteDistribution((0,), (1.0,))
        ch = BlockChannel.from_noise(
            nodes, noise, lambda k, i, xh, z: xh[0][0] + xh[0][1])
        session = NetworkSession(3, [Message("w1", 1, frozenset({3})),
                                     Message("w2", 2, frozenset({3}))])
        pa = CodeFunctionDistribution.uniform(channel_spaces(ch))
        reports = cutset_region(session, ch, pa)
        values = {tuple(sorted(r.cut)): r for r in reports}
        assert set(values) == {(1,), (2,), (1, 2)}
        assert values[(1,)].messages == ("w1",)
        assert values[(2,)].messages == ("w2",)
        assert values[(1, 2)].messages == ("w1", "w2")
        assert values[(1,)].bits_per_use == pytest.approx(1.0, abs=1e-9)
        assert values[(2,)].bits_per_use == pytest.approx(1.0, abs=1e-9)
        assert values[(1, 2)].bits_per_use == pytest.approx(1.5, abs=1e-9)

    def test_point_to_point_single_cut(self):
        ch = state_addition_channel()
        session = NetworkSession(2, [Message("w", 1, frozenset({2}))])
        pa = CodeFunctionDistribution.uniform(channel_spaces(ch))
        reports = cutset_region(session, ch, pa)
        assert len(reports) == 1
        assert reports[0].cut == frozenset({1})
        assert reports[0].bits_per_block == pytest.approx(
            2 * reports[0].bits_per_use)

    def test_all_cuts_flag(self):
        ch, session = two_way_feedback_channel(0.1)
        pa = CodeFunctionDistribution.uniform(channel_spaces(ch))
        assert len(cutset_region(session, ch, pa)) == 2
        assert len(cutset_region(session, ch, pa, all_cuts=True)) == 2

    def test_cut_explosion_guard(self):
        session = NetworkSession(17, [Message("w", 1, frozenset({2}))])
        with pytest.raises(ShapeError):
            enumerate_cuts(session)


class TestMemorylessSpecialization:
    def test_per_letter_collapse_with_codeword_trees(self, rng):
        # memoryless kernels viewed as a two-letter block: with codeword trees
        # and iid product inputs, exact and input-output values both collapse
        # to the classic one-letter cut expression
        K, L = 3, 2
        sizes_in, sizes_out = [2, 2, 1], [1, 2, 2]
        nodes = [NodeSpec(k + 1, (tuple(range(sizes_in[k])),) * L,
                          (tuple(range(sizes_out[k])),) * L) for k in range(K)]
        in_combos = list(itertools.product(*(tuple(range(s)) for s in sizes_in)))
        out_combos = list(itertools.product(*(tuple(range(s)) for s in sizes_out)))
        per_letter = {x: dict(zip(out_combos,
                                  rng.dirichlet(np.ones(len(out_combos)))))
                      for x in in_combos}
        kernels = []
        for i in range(1, L + 1):
            kernel = {}
            for x_hist in itertools.product(in_combos, repeat=i):
                for y_hist in itertools.product(out_combos, repeat=i - 1):
                    kernel[(x_hist, y_hist)] = dict(per_letter[x_hist[-1]])
            kernels.append(kernel)
        ch = BlockChannel(nodes, kernels)

        from inblock.model import constant_code_functions
        letters = [rng.dirichlet(np.ones(s)) for s in sizes_in]
        spaces, marginals = [], []
        for k in range(K):
            consts = constant_code_functions(nodes[k].inputs, nodes[k].outputs,
                                             node=k + 1)
            spaces.append(consts)
            marginals.append(np.array(
                [letters[k][cf.tables[0][0]] * letters[k][cf.tables[1][0]]
                 for cf in consts]))
        pa = CodeFunctionDistribution.independent(spaces, marginals)
        joint = joint_distribution(pa, ch)

        px = {x: float(np.prod([letters[k][x[k]] for k in range(K)]))
              for x in in_combos}
        for r in range(1, K):
            for S in itertools.combinations(range(K), r):
                Sc = tuple(k for k in range(K) if k not in S)
                Wcut = {x: {} for x in in_combos}
                for x, row in per_letter.items():
                    for y, p in row.items():
                        key = tuple(y[k] for k in Sc)
                        Wcut[x][key] = Wcut[x].get(key, 0.0) + p
                classic = bf_classic_cut(px, Wcut, S, Sc)
                S1 = {k + 1 for k in S}
                assert cut_mutual_information(joint, S1) == pytest.approx(
                    classic, abs=1e-9)
                assert weakened_bound(joint, S1, "input-output-weakened") == \
                    pytest.approx(classic, abs=1e-9)


class TestConcavity:
    def test_midpoint_probe(self, rng):
        # value(lam*p + (1-lam)*q) >= lam*value(p) + (1-lam)*value(q) - 1e-9
        for _ in range(15):
            ch = random_channel(rng)
            spaces = channel_spaces(ch)
            p = random_pa(rng, spaces)
            q = random_pa(rng, spaces)
            cuts = [frozenset(S) for r in range(1, ch.K)
                    for S in itertools.combinations(range(1, ch.K + 1), r)]
            for lam in (0.25, 0.5, 0.75):
                mixed = joint_distribution(p.mix(q, lam), ch)
                jp = joint_distribution(p, ch)
                jq = joint_distribution(q, ch)
                for S in cuts:
                    lhs = cut_mutual_information(mixed, S)
                    rhs = (lam * cut_mutual_information(jp, S)
                           + (1 - lam) * cut_mutual_information(jq, S))
                    assert lhs >= rhs - 1e-9
