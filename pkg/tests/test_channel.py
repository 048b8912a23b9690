"""Bob's observed gains and error rates, honest baseline, equivalent length."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from decoyattack import (
    AttackSummary,
    BobParams,
    EveParams,
    SourceParams,
    attacked_channel,
    attacked_stats,
    equivalent_length,
    honest_channel,
    honest_stats,
)


def summary_of(p_succ, e_ab=None, e_ae=None):
    return AttackSummary(
        omega=0.48, resend=np.zeros((4, 4)), p_succ=p_succ, e_ab=e_ab, e_ae=e_ae
    )


class TestAttackedChannel:
    def test_silent_attack_leaves_dark_counts(self, bob):
        q, e = attacked_channel(summary_of(0.0), bob)
        assert math.isclose(q, bob.y0, rel_tol=1e-15)
        assert math.isclose(e, 0.5, rel_tol=1e-12)

    def test_perfect_interception(self):
        bob = BobParams(y0=0.0)
        q, e = attacked_channel(summary_of(1.0, e_ab=0.0), bob)
        assert q == bob.eta_bob
        assert e == 0.0

    def test_zero_gain_has_undefined_qber(self):
        bob = BobParams(y0=0.0)
        q, e = attacked_channel(summary_of(0.0), bob)
        assert q == 0.0
        assert e is None

    @given(p=st.floats(0.0, 1.0), e_ab=st.floats(0.0, 1.0))
    @settings(max_examples=100)
    def test_gain_bounds(self, p, e_ab):
        bob = BobParams()
        q, e = attacked_channel(summary_of(p, e_ab=e_ab), bob)
        assert q >= bob.y0 * (1.0 - bob.eta_bob)
        assert 0.0 <= q <= 1.0
        assert e is None or 0.0 <= e <= 1.0

    def test_gain_increasing_in_success_probability(self, bob):
        gains = [attacked_channel(summary_of(p, e_ab=0.1), bob)[0] for p in np.linspace(0, 1, 11)]
        assert all(a < b for a, b in zip(gains, gains[1:]))

    def test_vacuum_under_attack_is_exactly_dark(self, source, eve, bob):
        # full pipeline: with ideal Eve detectors the vacuum intensity yields
        # q = Y0 and QBER 1/2 exactly
        stats, _ = attacked_stats(source, eve, bob)
        assert stats.q_vac == bob.y0
        assert math.isclose(stats.e_vac, 0.5, rel_tol=1e-12)


class TestHonestChannel:
    def test_vacuum(self, bob):
        q, e = honest_channel(0.0, 1.0, 0.0, bob)
        assert math.isclose(q, bob.y0, rel_tol=1e-15)
        assert math.isclose(e, 0.5, rel_tol=1e-12)

    def test_lossless_signal_gain(self):
        bob = BobParams(y0=0.0)
        q, _ = honest_channel(0.48, 1.0, 0.0, bob)
        assert math.isclose(q, 1.0 - math.exp(-0.0216), rel_tol=1e-14)
        assert math.isclose(q, 0.021368390585115062, rel_tol=1e-14)

    def test_gain_ratio_approaches_intensity_ratio(self):
        # small-transmittance regime with negligible dark counts
        bob = BobParams(y0=1e-15)
        q_mu, _ = honest_channel(0.48, 1e-4, 0.0, bob)
        q_nu, _ = honest_channel(0.10, 1e-4, 0.0, bob)
        assert math.isclose(q_mu / q_nu, 4.8, rel_tol=1e-4)

    def test_misalignment_contributes(self, bob):
        _, e_aligned = honest_channel(0.48, 1.0, 0.0, bob)
        _, e_tilted = honest_channel(0.48, 1.0, 0.02, bob)
        assert e_tilted > e_aligned

    def test_validation(self, bob):
        with pytest.raises(ValueError, match="eta_ch"):
            honest_channel(0.48, 0.0, 0.0, bob)
        with pytest.raises(ValueError, match="e_det"):
            honest_channel(0.48, 1.0, 0.7, bob)

    def test_honest_stats_bundle(self, source, bob):
        stats = honest_stats(source, bob)
        assert stats.q_mu > stats.q_nu > stats.q_vac


class TestEquivalentLength:
    def test_lossless_gain_is_zero_km(self):
        assert equivalent_length(0.48 * 0.045, 0.48, 0.045) == 0.0

    def test_inverts_fiber_loss(self):
        q = 0.48 * 0.045 * 10 ** (-0.21 * 50 / 10)
        assert math.isclose(equivalent_length(q, 0.48, 0.045), 50.0, rel_tol=1e-12)

    def test_excess_gain_clamps(self):
        assert equivalent_length(2 * 0.48 * 0.045, 0.48, 0.045) == 0.0

    def test_zero_gain_is_infinite(self):
        assert equivalent_length(0.0, 0.48, 0.045) == math.inf

    def test_monotone_non_increasing(self):
        qs = np.linspace(1e-7, 0.48 * 0.045 * 1.2, 50)
        lengths = [equivalent_length(float(q), 0.48, 0.045) for q in qs]
        assert all(a >= b for a, b in zip(lengths, lengths[1:]))
        assert all(v >= 0.0 for v in lengths)

    def test_validation(self):
        with pytest.raises(ValueError, match="gain"):
            equivalent_length(-1e-3, 0.48, 0.045)
        with pytest.raises(ValueError, match="loss"):
            equivalent_length(1e-3, 0.48, 0.045, a=0.0)


class TestBobParams:
    def test_background_error_is_pinned(self):
        with pytest.raises(ValueError, match="e0"):
            BobParams(e0=0.4)

    def test_error_correction_at_least_ideal(self):
        with pytest.raises(ValueError, match="f_ec"):
            BobParams(f_ec=0.9)
