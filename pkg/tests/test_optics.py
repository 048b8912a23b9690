"""Single-pulse physics: click probabilities, homodyne densities, tails."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad as scipy_quad
from scipy.special import erfc

from decoyattack import (
    EveParams,
    PHASE_ALPHABET,
    QuadratureConfig,
    SourceParams,
    binary_entropy,
    homodyne_mean,
    homodyne_pdf,
    homodyne_tail,
    phase_averaged_pdf,
    phase_averaged_tail,
    spd_click_probs,
)

# Frozen by independent dense trapezoidal double integration (641 phi nodes
# x 200001 x nodes), for mu=0.48, theta=0, phi_e=0, x0=1.5, side=above,
# delta=10 deg.
TAIL_ORACLE_FIG3 = 1.042525807629412e-02

intensities = st.floats(min_value=0.0, max_value=3.0)
thetas = st.sampled_from(PHASE_ALPHABET)
any_angle = st.floats(min_value=-2 * math.pi, max_value=2 * math.pi)
thresholds = st.floats(min_value=0.0, max_value=3.0)
widths = st.floats(min_value=0.5, max_value=2.0)


class TestSpdClickProbs:
    def test_vacuum_leaves_only_dark_counts(self):
        eve = EveParams(y0e=1.7e-6)
        for theta in PHASE_ALPHABET:
            assert spd_click_probs(0.0, theta, eve) == (1.7e-6, 1.7e-6)

    def test_destructive_port_never_clicks(self, eve):
        _, p_d1 = spd_click_probs(0.48, 0.0, eve)
        assert p_d1 == 0.0

    def test_balanced_at_quarter_phase(self, eve):
        p_d0, p_d1 = spd_click_probs(0.48, math.pi / 2, eve)
        expected = 1.0 - math.exp(-0.12)
        assert math.isclose(p_d0, expected, rel_tol=1e-14)
        assert math.isclose(p_d1, expected, rel_tol=1e-13)
        assert math.isclose(expected, 0.11307956328284248, rel_tol=1e-15)

    def test_negative_intensity_rejected(self, eve):
        with pytest.raises(ValueError, match="non-negative"):
            spd_click_probs(-0.1, 0.0, eve)

    @given(omega=intensities, theta=any_angle, y0e=st.floats(0.0, 0.1))
    @settings(max_examples=100)
    def test_probabilities_in_range(self, omega, theta, y0e):
        eve = EveParams(y0e=y0e)
        p_d0, p_d1 = spd_click_probs(omega, theta, eve)
        assert y0e <= p_d0 < 1.0
        assert y0e <= p_d1 < 1.0

    @given(omega=intensities, theta=thetas)
    @settings(max_examples=50)
    def test_half_phase_shift_swaps_ports(self, omega, theta):
        eve = EveParams()
        p_d0, p_d1 = spd_click_probs(omega, theta, eve)
        q_d0, q_d1 = spd_click_probs(omega, theta + math.pi, eve)
        assert math.isclose(p_d0, q_d1, rel_tol=1e-12, abs_tol=1e-15)
        assert math.isclose(p_d1, q_d0, rel_tol=1e-12, abs_tol=1e-15)


class TestHomodynePdf:
    def test_vacuum_is_centered(self, eve):
        assert math.isclose(
            float(homodyne_pdf(0.0, 0.0, 0.0, 0.0, 0.0, eve)),
            math.sqrt(2.0 / math.pi),
            rel_tol=1e-14,
        )

    @given(omega=intensities, theta=thetas, phi=st.floats(0, 0.5), kappa=widths)
    @settings(max_examples=25, deadline=None)
    def test_normalized(self, omega, theta, phi, kappa):
        eve = EveParams(kappa_e=kappa)
        total, err = scipy_quad(
            lambda x: float(homodyne_pdf(x, omega, theta, phi, 0.0, eve)),
            -12.0 * kappa - 2.0,
            12.0 * kappa + 2.0,
        )
        assert abs(total - 1.0) < 1e-9

    def test_mean_matches_quadrature(self, eve):
        # setting of the reference distribution plot: mu=0.3, theta=phi=phi_e=0
        m = homodyne_mean(0.3, 0.0, 0.0, 0.0, eve)
        assert math.isclose(m, 0.27386127875258304, rel_tol=1e-15)
        first_moment, _ = scipy_quad(
            lambda x: x * float(homodyne_pdf(x, 0.3, 0.0, 0.0, 0.0, eve)), -10, 10
        )
        assert math.isclose(first_moment, m, rel_tol=1e-10)

    def test_array_input(self, eve):
        xs = np.linspace(-2, 2, 11)
        vals = homodyne_pdf(xs, 0.3, 0.0, 0.0, 0.0, eve)
        assert vals.shape == xs.shape
        assert (vals >= 0).all()


class TestHomodyneTail:
    def test_symmetric_gaussian_half_mass(self, eve):
        assert math.isclose(
            homodyne_tail(0.0, 0.0, 0.0, 0.0, 0.0, "above", eve), 0.5, rel_tol=1e-14
        )

    def test_matches_numeric_quadrature(self, eve):
        analytic = homodyne_tail(0.0, 0.0, 0.0, 0.0, 1.5, "above", eve)
        assert math.isclose(analytic, 0.5 * erfc(1.5 * math.sqrt(2.0)), rel_tol=1e-14)
        numeric, _ = scipy_quad(
            lambda x: float(homodyne_pdf(x, 0.0, 0.0, 0.0, 0.0, eve)),
            1.5,
            12.0,
            epsabs=1e-14,
            epsrel=1e-13,
        )
        assert abs(analytic - numeric) < 1e-10

    @given(omega=intensities, theta=thetas, phi=st.floats(0, 0.5), x0=thresholds, kappa=widths)
    @settings(max_examples=100)
    def test_reflection_identity(self, omega, theta, phi, x0, kappa):
        eve = EveParams(kappa_e=kappa)
        above = homodyne_tail(omega, theta, phi, 0.0, x0, "above", eve)
        below = homodyne_tail(omega, theta + math.pi, phi, 0.0, x0, "below", eve)
        assert math.isclose(above, below, rel_tol=1e-11, abs_tol=1e-15)

    @given(omega=intensities, theta=thetas, x0=thresholds, kappa=widths)
    @settings(max_examples=100)
    def test_total_mass_partitions(self, omega, theta, x0, kappa):
        eve = EveParams(kappa_e=kappa)
        above = homodyne_tail(omega, theta, 0.0, 0.0, x0, "above", eve)
        below = homodyne_tail(omega, theta, 0.0, 0.0, x0, "below", eve)
        # the dead-zone mass via the same erfc machinery
        m = homodyne_mean(omega, theta, 0.0, 0.0, eve)
        middle = 0.5 * (
            erfc(math.sqrt(2.0) * (-x0 - m) / kappa) - erfc(math.sqrt(2.0) * (x0 - m) / kappa)
        )
        assert abs(above + below + middle - 1.0) < 1e-12

    def test_invalid_side_rejected(self, eve):
        with pytest.raises(ValueError, match="side"):
            homodyne_tail(0.1, 0.0, 0.0, 0.0, 1.0, "left", eve)

    def test_negative_threshold_rejected(self, eve):
        with pytest.raises(ValueError, match="x0"):
            homodyne_tail(0.1, 0.0, 0.0, 0.0, -1.0, "above", eve)


class TestPhaseAveragedPdf:
    def test_degenerate_window_is_point_evaluation(self, eve):
        for x in (-1.0, 0.0, 0.7):
            assert phase_averaged_pdf(x, 0.3, 0.0, 0.0, 0.0, eve) == homodyne_pdf(
                x, 0.3, 0.0, 0.0, 0.0, eve
            )

    def test_normalized(self, eve, quad):
        delta = math.pi / 4
        total, _ = scipy_quad(
            lambda x: float(phase_averaged_pdf(x, 0.3, 0.0, 0.0, delta, eve, quad)),
            -12.0,
            12.0,
            limit=200,
        )
        assert abs(total - 1.0) < 1e-9

    def test_peak_signs_across_alphabet(self, eve, quad):
        # quarter-window, mu=0.3 reference setting: the two oscillator-aligned
        # phases peak at opposite signs, the conjugate pair sits near zero
        delta = math.pi / 4
        means = []
        for theta in PHASE_ALPHABET:
            m, _ = scipy_quad(
                lambda x, th=theta: x
                * float(phase_averaged_pdf(x, 0.3, th, 0.0, delta, eve, quad)),
                -12.0,
                12.0,
                limit=200,
            )
            means.append(m)
        assert means[0] > 0 > means[2]
        assert abs(means[0]) > abs(means[1]) and abs(means[0]) > abs(means[3])
        assert abs(means[2]) > abs(means[1]) and abs(means[2]) > abs(means[3])


class TestPhaseAveragedTail:
    def test_degenerate_window(self, eve):
        got = phase_averaged_tail(0.48, 0.0, 0.0, 1.5, "above", 0.0, eve)
        assert got == homodyne_tail(0.48, 0.0, 0.0, 0.0, 1.5, "above", eve)

    def test_vacuum_is_phase_blind(self, eve, quad):
        delta = math.radians(25.0)
        ref = phase_averaged_tail(0.0, 0.0, 0.0, 1.2, "above", delta, eve, quad)
        for theta in PHASE_ALPHABET:
            for phi_e in (0.0, math.pi / 2):
                assert phase_averaged_tail(0.0, theta, phi_e, 1.2, "above", delta, eve, quad) == ref

    def test_pinned_against_dense_double_quadrature(self, eve, quad):
        got = phase_averaged_tail(0.48, 0.0, 0.0, 1.5, "above", math.radians(10.0), eve, quad)
        assert abs(got - TAIL_ORACLE_FIG3) < 1e-9

    def test_numeric_mode_agrees(self, eve):
        numeric = QuadratureConfig(phi_nodes=64, tail_mode="numeric")
        analytic = QuadratureConfig(phi_nodes=64, tail_mode="analytic")
        for side in ("above", "below"):
            a = phase_averaged_tail(0.48, 0.0, 0.0, 1.5, side, math.radians(10.0), eve, analytic)
            n = phase_averaged_tail(0.48, 0.0, 0.0, 1.5, side, math.radians(10.0), eve, numeric)
            assert abs(a - n) < 1e-10

    def test_monotone_in_threshold(self, eve, quad):
        delta = math.radians(10.0)
        tails = [
            phase_averaged_tail(0.48, 0.0, 0.0, x0, "above", delta, eve, quad)
            for x0 in np.linspace(0.0, 3.0, 31)
        ]
        assert all(a >= b for a, b in zip(tails, tails[1:]))
        assert all(0.0 <= t <= 1.0 for t in tails)

    @given(
        omega=intensities,
        theta=thetas,
        x0=thresholds,
        delta=st.floats(min_value=0.0, max_value=math.pi / 2),
    )
    @settings(max_examples=50, deadline=None)
    def test_node_doubling_converged(self, omega, theta, x0, delta):
        eve = EveParams()
        coarse = phase_averaged_tail(
            omega, theta, 0.0, x0, "above", delta, eve, QuadratureConfig(64)
        )
        fine = phase_averaged_tail(
            omega, theta, 0.0, x0, "above", delta, eve, QuadratureConfig(128)
        )
        assert abs(coarse - fine) < 1e-9


class TestBinaryEntropy:
    def test_known_values(self):
        assert binary_entropy(0.5) == 1.0
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0
        # exact: 2 - (3/4) log2 3
        assert math.isclose(binary_entropy(0.25), 0.8112781244591328, rel_tol=1e-15)

    def test_domain_errors(self):
        for p in (-0.1, 1.1, 2.0):
            with pytest.raises(ValueError, match="probability"):
                binary_entropy(p)

    @given(p=st.floats(min_value=0.0, max_value=1.0))
    @settings(max_examples=200)
    def test_symmetric_and_bounded(self, p):
        h = binary_entropy(p)
        assert 0.0 <= h <= 1.0
        assert math.isclose(h, binary_entropy(1.0 - p), rel_tol=1e-12, abs_tol=1e-12)
        assert h <= binary_entropy(0.5)


class TestParamValidation:
    def test_source_orders_intensities(self):
        with pytest.raises(ValueError, match="0 < nu < mu"):
            SourceParams(mu=0.1, nu=0.48)

    def test_source_delta_range(self):
        with pytest.raises(ValueError, match="delta"):
            SourceParams(delta=7.0)

    def test_eve_threshold_nonnegative(self):
        with pytest.raises(ValueError, match="x0"):
            EveParams(x0=-0.5)

    def test_eve_balanced_tap_pinned(self):
        with pytest.raises(ValueError, match="bs_t"):
            EveParams(bs_t=0.4)

    def test_quadrature_node_count(self):
        with pytest.raises(ValueError, match="phi_nodes"):
            QuadratureConfig(phi_nodes=0)
