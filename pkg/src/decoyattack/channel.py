"""Bob's observed per-intensity gain and QBER.

Under the attack, Eve resends a single photon on every conclusive round,
so Bob's gain is her success probability thinned by his transmittance plus
dark counts; the honest model is the usual weak-coherent channel and is
used only as a monitoring baseline.  The equivalent-length helper converts
a signal gain into the fiber length that would produce it honestly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .attack import AttackSummary, ErrorMatrices, DEFAULT_ERROR_MATRICES, attack_summary
from .optics import EveParams, QuadratureConfig, SourceParams

#: Loss of standard telecom fiber, dB/km.
FIBER_LOSS_DB_PER_KM = 0.21


@dataclass(frozen=True)
class BobParams:
    """Bob's receiver: dark counts, transmittance and error-correction cost.

    ``e0`` is the error rate of background (dark-count) detections and is
    pinned at 1/2; ``f_ec`` is the error-correction inefficiency factor.
    """

    y0: float = 1.7e-6
    eta_bob: float = 0.045
    e0: float = 0.5
    f_ec: float = 1.22

    def __post_init__(self) -> None:
        if not 0.0 <= self.y0 < 1.0:
            raise ValueError(f"y0 must lie in [0, 1), got {self.y0}")
        if not 0.0 < self.eta_bob <= 1.0:
            raise ValueError(f"eta_bob must lie in (0, 1], got {self.eta_bob}")
        if self.e0 != 0.5:
            raise ValueError(f"e0 is fixed at 1/2, got {self.e0}")
        if self.f_ec < 1.0:
            raise ValueError(f"f_ec must be >= 1, got {self.f_ec}")


@dataclass(frozen=True)
class ChannelStats:
    """Observed gain and QBER for the signal, decoy and vacuum intensities.

    A QBER is None when the corresponding gain vanishes (no detections, so
    the error fraction is undefined).
    """

    q_mu: float
    e_mu: float | None
    q_nu: float
    e_nu: float | None
    q_vac: float
    e_vac: float | None


def attacked_channel(summary: AttackSummary, bob: BobParams) -> tuple[float, float | None]:
    """Gain and QBER Bob observes for one intensity under the attack.

    Eve's resends arrive as single photons, detected with probability
    ``eta_bob`` and carrying her induced error rate; every other slot can
    still dark-count with error 1/2.
    """
    q = bob.eta_bob * summary.p_succ + (1.0 - summary.p_succ * bob.eta_bob) * bob.y0
    if q == 0.0:
        return 0.0, None
    qe = (1.0 - summary.p_succ * bob.eta_bob) * bob.y0 * bob.e0
    if summary.p_succ > 0.0 and summary.e_ab is not None:
        qe += bob.eta_bob * summary.p_succ * summary.e_ab
    return q, qe / q


def honest_channel(
    omega: float, eta_ch: float, e_det: float, bob: BobParams
) -> tuple[float, float | None]:
    """Gain and QBER of the undisturbed weak-coherent channel.

    Standard model: Poissonian detection through combined transmittance
    ``eta_ch * eta_bob``, misalignment error ``e_det`` on photon
    detections, error 1/2 on dark counts.  Serves as the baseline the
    gain-ratio monitor compares against.
    """
    if not 0.0 < eta_ch <= 1.0:
        raise ValueError(f"eta_ch must lie in (0, 1], got {eta_ch}")
    if not 0.0 <= e_det <= 0.5:
        raise ValueError(f"e_det must lie in [0, 1/2], got {e_det}")
    if omega < 0.0:
        raise ValueError(f"intensity must be non-negative, got {omega}")
    eta = eta_ch * bob.eta_bob
    q = -math.expm1(-omega * eta) * (1.0 - bob.y0) + bob.y0
    if q == 0.0:
        return 0.0, None
    qe = bob.e0 * bob.y0 + e_det * -math.expm1(-omega * eta)
    return q, qe / q


def equivalent_length(
    q_mu: float, mu: float, eta_bob: float, a: float = FIBER_LOSS_DB_PER_KM
) -> float:
    """Fiber length whose loss would honestly produce the observed gain.

    Gains at or above the lossless expectation ``mu * eta_bob`` clamp to
    0 km; a vanishing gain maps to +inf.
    """
    if q_mu < 0.0:
        raise ValueError(f"gain must be non-negative, got {q_mu}")
    if a <= 0.0:
        raise ValueError(f"fiber loss must be positive, got {a}")
    if q_mu == 0.0:
        return math.inf
    return -(10.0 / a) * math.log10(min(1.0, q_mu / (mu * eta_bob)))


def attacked_stats(
    source: SourceParams,
    eve: EveParams,
    bob: BobParams,
    errmat: ErrorMatrices = DEFAULT_ERROR_MATRICES,
    quad: QuadratureConfig = QuadratureConfig(),
) -> tuple[ChannelStats, dict[str, AttackSummary]]:
    """Full attacked-channel statistics for all three intensities."""
    summaries = {
        name: attack_summary(omega, source, eve, errmat, quad)
        for name, omega in zip(("mu", "nu", "vac"), source.intensities)
    }
    gains = {name: attacked_channel(s, bob) for name, s in summaries.items()}
    stats = ChannelStats(
        q_mu=gains["mu"][0], e_mu=gains["mu"][1],
        q_nu=gains["nu"][0], e_nu=gains["nu"][1],
        q_vac=gains["vac"][0], e_vac=gains["vac"][1],
    )
    return stats, summaries


def honest_stats(
    source: SourceParams, bob: BobParams, eta_ch: float = 1.0, e_det: float = 0.0
) -> ChannelStats:
    """Honest-channel statistics for all three intensities."""
    vals = [honest_channel(om, eta_ch, e_det, bob) for om in source.intensities]
    return ChannelStats(
        q_mu=vals[0][0], e_mu=vals[0][1],
        q_nu=vals[1][0], e_nu=vals[1][1],
        q_vac=vals[2][0], e_vac=vals[2][1],
    )
