"""Event-level Monte Carlo of the attacked protocol.

Samples every round explicitly: Alice's phase choice and the pulse's
global phase, Eve's oscillator setting, her homodyne outcome and detector
clicks, the resend decision, and Bob's detection including dark counts.
Empirical statistics with standard errors validate each closed form in
:mod:`decoyattack.attack` and :mod:`decoyattack.channel`.

Randomness comes from numpy's PCG64 generator.  Per intensity, the sample
budget is split into fixed-size streams and stream ``s`` of intensity
``i`` is seeded with ``SeedSequence((seed, i, s))``, so results are
reproducible bit-for-bit for a given config regardless of scheduling.
Within a stream, each round consumes one draw of every per-round variable
in a fixed order (phase index, global phase, oscillator choice, homodyne
noise, two detector uniforms, Bob's click uniform, resend/Eve error
uniforms, dark-count uniforms), whether or not the round's branch uses it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .attack import DEFAULT_ERROR_MATRICES, ErrorMatrices, ResendDecision
from .channel import BobParams
from .optics import EveParams, SourceParams

#: Rounds simulated per independently seeded stream.
STREAM_SIZE = 1_000_000


@dataclass(frozen=True)
class McConfig:
    """Sample budget, seed and the intensity list to simulate."""

    n_samples: int
    seed: int
    intensities: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if len(self.intensities) == 0:
            raise ValueError("intensities must be non-empty")
        if any(om < 0.0 for om in self.intensities):
            raise ValueError(f"intensities must be non-negative, got {self.intensities}")


@dataclass(frozen=True)
class ValueWithError:
    """An empirical estimate with its plug-in standard error.

    Standard errors are binomial (or stratified-ratio) plug-ins and are 0
    for degenerate counts, e.g. a single sample.
    """

    value: float
    stderr: float


@dataclass(frozen=True)
class RoundRecord:
    """Everything that happened in one simulated round."""

    alice_index: int
    phi: float
    phi_e: float
    x: float
    d0_click: bool
    d1_click: bool
    decision: ResendDecision
    resend_error: bool | None
    eve_error: bool | None
    bob_signal_click: bool
    bob_dark_click: bool

    @property
    def bob_detected(self) -> bool:
        return self.bob_signal_click or self.bob_dark_click

    @property
    def bob_error(self) -> bool | None:
        if self.bob_signal_click:
            return self.resend_error
        if self.bob_dark_click:
            return self._dark_error
        return None

    # set by the sampler; dark-count detections err with probability 1/2
    _dark_error: bool = False


@dataclass(frozen=True)
class IntensityEstimate:
    """Empirical statistics for one intensity.

    ``resend_counts[k][j]`` counts conclusive rounds that resent phase k
    given Alice sent j; column totals plus vacuum decisions recover
    ``n_per_alice_phase``, which sums to ``n_samples``.  Conditional error
    estimates are None (undefined) when no round was conclusive, or when
    no detection occurred.
    """

    omega: float
    n_samples: int
    n_per_alice_phase: np.ndarray
    resend_counts: np.ndarray
    n_successes: int
    n_detections: int
    n_detection_errors: int
    p_succ: ValueWithError
    e_ab: ValueWithError | None
    e_ae: ValueWithError | None
    gain: ValueWithError
    qber: ValueWithError | None


@dataclass(frozen=True)
class McEstimate:
    """Per-intensity empirical statistics for one oracle run."""

    config: McConfig
    per_intensity: tuple[IntensityEstimate, ...]

    def intensity(self, omega: float) -> IntensityEstimate:
        for est in self.per_intensity:
            if est.omega == omega:
                return est
        raise KeyError(f"no estimate for intensity {omega}")


def _sample_stream(
    rng: np.random.Generator,
    n: int,
    omega: float,
    source: SourceParams,
    eve: EveParams,
    bob: BobParams,
    errmat: ErrorMatrices,
) -> dict[str, np.ndarray]:
    """Draw ``n`` full rounds; the draw order is the documented contract."""
    thetas = np.asarray(source.phase_alphabet)
    p_d0 = -np.expm1(-omega * eve.eta_e * (1.0 + np.cos(thetas)) / 4.0) * (1.0 - eve.y0e) + eve.y0e
    p_d1 = -np.expm1(-omega * eve.eta_e * (1.0 - np.cos(thetas)) / 4.0) * (1.0 - eve.y0e) + eve.y0e

    j = rng.integers(0, 4, size=n)
    phi = rng.random(n) * source.delta
    basis = rng.integers(0, 2, size=n)
    phi_e = basis * (math.pi / 2.0)
    mean = eve.lambda_e * np.sqrt(omega) * np.cos(thetas[j] + phi - phi_e) / 2.0
    x = mean + 0.5 * eve.kappa_e * rng.standard_normal(n)
    d0 = rng.random(n) < p_d0[j]
    d1 = rng.random(n) < p_d1[j]
    u_bob = rng.random(n)
    u_err_ab = rng.random(n)
    u_err_ae = rng.random(n)
    u_dark = rng.random(n)
    u_dark_err = rng.random(n)

    pos = (x > eve.x0) & d0
    neg = (x < -eve.x0) & d1
    success = pos | neg
    k = np.where(pos, basis, np.where(neg, 2 + basis, -1))

    e_ab_cell = np.where(success, errmat.e_ab[k, j], 0.0)
    e_ae_cell = np.where(success, errmat.e_ae[k, j], 0.0)
    resend_error = success & (u_err_ab < e_ab_cell)
    eve_error = success & (u_err_ae < e_ae_cell)
    signal_click = success & (u_bob < bob.eta_bob)
    dark_click = ~signal_click & (u_dark < bob.y0)
    dark_error = u_dark_err < bob.e0
    detected = signal_click | dark_click
    det_error = (signal_click & resend_error) | (dark_click & dark_error)

    return dict(
        j=j, phi=phi, basis=basis, phi_e=phi_e, x=x, d0=d0, d1=d1,
        success=success, k=k, resend_error=resend_error, eve_error=eve_error,
        signal_click=signal_click, dark_click=dark_click, dark_error=dark_error,
        detected=detected, det_error=det_error,
    )


def simulate_round(
    rng: np.random.Generator,
    omega: float,
    source: SourceParams,
    eve: EveParams,
    bob: BobParams,
    errmat: ErrorMatrices = DEFAULT_ERROR_MATRICES,
) -> RoundRecord:
    """Simulate a single round, advancing ``rng`` by one round's draws."""
    s = _sample_stream(rng, 1, omega, source, eve, bob, errmat)
    success = bool(s["success"][0])
    decision = ResendDecision.phase(int(s["k"][0])) if success else ResendDecision.vacuum()
    return RoundRecord(
        alice_index=int(s["j"][0]),
        phi=float(s["phi"][0]),
        phi_e=float(s["phi_e"][0]),
        x=float(s["x"][0]),
        d0_click=bool(s["d0"][0]),
        d1_click=bool(s["d1"][0]),
        decision=decision,
        resend_error=bool(s["resend_error"][0]) if success else None,
        eve_error=bool(s["eve_error"][0]) if success else None,
        bob_signal_click=bool(s["signal_click"][0]),
        bob_dark_click=bool(s["dark_click"][0]),
        _dark_error=bool(s["dark_error"][0]),
    )


def _binomial_se(p: float, n: int) -> float:
    if n <= 0:
        return 0.0
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def _stratified_error(
    err_per_j: np.ndarray, succ_per_j: np.ndarray
) -> ValueWithError | None:
    """Average of per-Alice-phase conditional error rates, as the closed
    form defines them; phases with no conclusive rounds contribute 0."""
    if succ_per_j.sum() == 0:
        return None
    ratios = np.zeros(4)
    var = 0.0
    for jj in range(4):
        if succ_per_j[jj] > 0:
            ratios[jj] = err_per_j[jj] / succ_per_j[jj]
            var += ratios[jj] * (1.0 - ratios[jj]) / succ_per_j[jj]
    return ValueWithError(value=float(ratios.mean()), stderr=0.25 * math.sqrt(var))


def estimate(
    source: SourceParams,
    eve: EveParams,
    bob: BobParams,
    mc: McConfig,
    errmat: ErrorMatrices = DEFAULT_ERROR_MATRICES,
) -> McEstimate:
    """Run the oracle for every configured intensity.

    Deterministic for a given config: streams are independently seeded
    from ``(seed, intensity index, stream index)`` and aggregation is a
    plain sum, so neither chunking nor execution order can change the
    result.
    """
    results = []
    for i_om, omega in enumerate(mc.intensities):
        n_per_j = np.zeros(4, dtype=np.int64)
        counts = np.zeros((4, 4), dtype=np.int64)
        err_ab_j = np.zeros(4, dtype=np.int64)
        err_ae_j = np.zeros(4, dtype=np.int64)
        n_det = 0
        n_det_err = 0
        remaining = mc.n_samples
        stream = 0
        while remaining > 0:
            n = min(remaining, STREAM_SIZE)
            rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((mc.seed, i_om, stream))))
            s = _sample_stream(rng, n, omega, source, eve, bob, errmat)
            n_per_j += np.bincount(s["j"], minlength=4)
            succ = s["success"]
            cell = s["k"][succ] * 4 + s["j"][succ]
            counts += np.bincount(cell, minlength=16).reshape(4, 4)
            err_ab_j += np.bincount(s["j"][succ & s["resend_error"]], minlength=4)
            err_ae_j += np.bincount(s["j"][succ & s["eve_error"]], minlength=4)
            n_det += int(s["detected"].sum())
            n_det_err += int(s["det_error"].sum())
            remaining -= n
            stream += 1

        succ_per_j = counts.sum(axis=0)
        n_succ = int(succ_per_j.sum())
        p_hat = n_succ / mc.n_samples
        q_hat = n_det / mc.n_samples
        counts.flags.writeable = False
        n_per_j.flags.writeable = False
        results.append(
            IntensityEstimate(
                omega=omega,
                n_samples=mc.n_samples,
                n_per_alice_phase=n_per_j,
                resend_counts=counts,
                n_successes=n_succ,
                n_detections=n_det,
                n_detection_errors=n_det_err,
                p_succ=ValueWithError(p_hat, _binomial_se(p_hat, mc.n_samples)),
                e_ab=_stratified_error(err_ab_j, succ_per_j),
                e_ae=_stratified_error(err_ae_j, succ_per_j),
                gain=ValueWithError(q_hat, _binomial_se(q_hat, mc.n_samples)),
                qber=(
                    ValueWithError(n_det_err / n_det, _binomial_se(n_det_err / n_det, n_det))
                    if n_det > 0
                    else None
                ),
            )
        )
    return McEstimate(config=mc, per_intensity=tuple(results))
