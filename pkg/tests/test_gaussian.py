"""Gaussian-network tests.

Claims:
    - whitening: identity/scaled noise act as expected, and the whitened
      Gram matrix equals G^T Q^{-1} G for random SPD covariances
    - upper bound: closed form for a single link, zero for a zero cut matrix,
      dominates the log-det value at the white input law
    - lower bound: single-link closed form, clamping at zero power
    - determinant identity: log det (I + c G G^T) equals the singular-value
      sum at any scalar input covariance
    - half-covariance determinant inequality |A + B/2| >= |A + B| / 2^b
    - the additive-gap certificate holds on 1000 randomized networks and the
      single link realizes exactly one bit per letter
    - validation: triangularity, positive definiteness, cut validity
"""

from math import log2

import numpy as np
import pytest

from inblock.errors import ShapeError
from inblock.gaussian import (
    GaussianNetwork,
    cut_upper_bound,
    gap_bound_per_letter,
    gap_certificate,
    qf_lower_bound,
    whiten,
)


def random_network(rng, *, K=None, L=None, power=None):
    K = K if K is not None else int(rng.integers(2, 6))
    L = L if L is not None else int(rng.integers(1, 5))
    gains = {}
    for k in range(1, K + 1):
        for j in range(1, K + 1):
            if k != j and rng.random() < 0.75:
                gains[(k, j)] = np.tril(rng.uniform(-2.0, 2.0, size=(L, L)))
    power = power if power is not None else float(rng.choice([0.1, 1.0, 10.0]))
    sinks = frozenset(rng.choice(range(2, K + 1),
                                 size=rng.integers(1, K), replace=False).tolist())
    return GaussianNetwork(K=K, L=L, power=power, gains=gains, sinks=sinks)


def random_spd(rng, n):
    a = rng.normal(size=(n, n))
    return a @ a.T + n * np.eye(n)


class TestWhiten:
    def test_unit_noise_is_identity_whitening(self):
        g = np.array([[1.5, 0.0], [0.7, -0.3]])
        net = GaussianNetwork(K=2, L=2, power=1.0, gains={(2, 1): g},
                              sinks=frozenset({2}))
        assert np.allclose(whiten(net, {1}), g)

    def test_scaled_noise_divides(self):
        g = np.array([[2.0]])
        net = GaussianNetwork(K=2, L=1, power=1.0, gains={(2, 1): g},
                              noise={2: np.array([[4.0]])}, sinks=frozenset({2}))
        assert np.allclose(whiten(net, {1}), g / 2.0)

    def test_gram_matrix_matches_inverse_covariance(self, rng):
        for _ in range(20):
            L = int(rng.integers(1, 4))
            g = np.tril(rng.normal(size=(L, L)))
            q = random_spd(rng, L)
            net = GaussianNetwork(K=2, L=L, power=1.0, gains={(2, 1): g},
                                  noise={2: q}, sinks=frozenset({2}))
            wh = whiten(net, {1})
            assert np.allclose(wh.T @ wh, g.T @ np.linalg.solve(q, g), atol=1e-9)

    def test_invalid_cut_rejected(self):
        net = GaussianNetwork(K=2, L=1, power=1.0, gains={(2, 1): [[1.0]]},
                              sinks=frozenset({2}))
        with pytest.raises(ShapeError):
            whiten(net, {2})
        with pytest.raises(ShapeError):
            whiten(net, {1, 2})


class TestBounds:
    def test_single_link_closed_forms(self):
        g, P = 1.7, 2.5
        net = GaussianNetwork(K=2, L=1, power=P, gains={(2, 1): [[g]]},
                              sinks=frozenset({2}))
        up = cut_upper_bound(net, {1})
        assert up == pytest.approx(0.5 * log2(1 + g * g * P), abs=1e-12)
        lo = qf_lower_bound(net, {1})
        assert lo.raw == pytest.approx(up - 1.0, abs=1e-12)

    def test_zero_gain_gives_zero(self):
        net = GaussianNetwork(K=2, L=2, power=5.0, gains={},
                              sinks=frozenset({2}))
        assert cut_upper_bound(net, {1}) == 0.0
        assert qf_lower_bound(net, {1}).value == 0.0

    def test_zero_power_clamps(self):
        net = GaussianNetwork(K=2, L=1, power=0.0, gains={(2, 1): [[3.0]]},
                              sinks=frozenset({2}))
        lo = qf_lower_bound(net, {1})
        assert lo.value == 0.0 and lo.clamped
        assert lo.raw == pytest.approx(-1.0, abs=1e-12)

    def test_upper_dominates_white_input_log_det(self, rng):
        # the per-subchannel power grant is a relaxation of any feasible law
        for _ in range(50):
            net = random_network(rng, K=3)
            for S in net.valid_cuts():
                wh = whiten(net, S)
                cov = np.eye(wh.shape[0]) + (net.power / net.L) * (wh @ wh.T)
                logdet = 0.5 * np.linalg.slogdet(cov)[1] / np.log(2.0)
                assert cut_upper_bound(net, S) >= logdet - 1e-9

    def test_lower_never_exceeds_upper(self, rng):
        for _ in range(100):
            net = random_network(rng)
            for S in net.valid_cuts():
                assert (qf_lower_bound(net, S).value
                        <= cut_upper_bound(net, S) + 1e-9)


class TestMatrixIdentities:
    def test_log_det_equals_singular_value_sum(self, rng):
        for _ in range(30):
            n, m = int(rng.integers(1, 5)), int(rng.integers(1, 5))
            g = rng.normal(size=(n, m))
            c = float(rng.uniform(0.05, 5.0))
            s = np.linalg.svd(g, compute_uv=False)
            want = np.sum(0.5 * np.log2(1 + c * s ** 2))
            got = 0.5 * np.linalg.slogdet(np.eye(n) + c * g @ g.T)[1] / np.log(2.0)
            assert got == pytest.approx(want, abs=1e-8)

    def test_half_covariance_determinant_inequality(self, rng):
        for _ in range(40):
            b = int(rng.integers(1, 9))
            A = random_spd(rng, b)
            B = random_spd(rng, b)
            lhs = np.linalg.det(A + B / 2.0)
            rhs = np.linalg.det(A + B) / (2.0 ** b)
            assert lhs >= rhs * (1 - 1e-9)


class TestGapCertificate:
    def test_thousand_random_networks(self, rng):
        for _ in range(1000):
            net = random_network(rng)
            report = gap_certificate(net)
            assert report.certified
            bound = gap_bound_per_letter(net.K, net.L)
            for row in report.cuts:
                assert row.gap_per_letter <= bound + 1e-6
                # the per-cut accounting is itself below the stated budget
                s = len(row.cut)
                budget = net.K / 2 + (s / 2) * log2(s * net.L) if s * net.L > 1 \
                    else net.K / 2
                assert row.gap_per_letter <= max(budget, 0.0) + 1e-6

    def test_single_link_realizes_one_bit(self):
        net = GaussianNetwork(K=2, L=1, power=1.0, gains={(2, 1): [[2.0]]},
                              sinks=frozenset({2}))
        report = gap_certificate(net)
        assert report.realized_gap_per_letter == pytest.approx(1.0, abs=1e-12)
        assert report.bound_per_letter == pytest.approx(2.0, abs=1e-12)

    def test_all_zero_network(self):
        net = GaussianNetwork(K=3, L=2, power=1.0, gains={},
                              sinks=frozenset({3}))
        report = gap_certificate(net)
        assert report.min_cut_upper_per_letter == 0.0
        assert report.min_cut_lower_per_letter == 0.0
        assert report.realized_gap_per_letter == 0.0


class TestValidation:
    def test_upper_triangular_entries_rejected(self):
        with pytest.raises(ShapeError):
            GaussianNetwork(K=2, L=2, power=1.0,
                            gains={(2, 1): [[1.0, 0.5], [0.0, 1.0]]},
                            sinks=frozenset({2}))

    def test_noise_must_be_positive_definite(self):
        with pytest.raises(ShapeError):
            GaussianNetwork(K=2, L=1, power=1.0, gains={(2, 1): [[1.0]]},
                            noise={2: [[0.0]]}, sinks=frozenset({2}))

    def test_sink_set_checked(self):
        with pytest.raises(ShapeError):
            GaussianNetwork(K=2, L=1, power=1.0, gains={(2, 1): [[1.0]]},
                            sinks=frozenset({1}))

    def test_self_gain_rejected(self):
        with pytest.raises(ShapeError):
            GaussianNetwork(K=2, L=1, power=1.0, gains={(1, 1): [[1.0]]},
                            sinks=frozenset({2}))
