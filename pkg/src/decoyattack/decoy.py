"""What Alice and Bob compute from their observed statistics.

Weak+vacuum decoy-state bounds on the single-photon yield and error rate,
and the asymptotic secret-key rate built from them.  The report keeps raw
(possibly negative) intermediate bounds so sweeps can show where the
estimate crosses zero, and carries an insecurity flag: statistics produced
by the attacked channel describe an intercept-resend (entanglement
breaking) channel, whose true extractable rate is zero no matter what the
estimate says.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import BobParams, ChannelStats
from .optics import SourceParams, binary_entropy

#: Sifting factor of standard BB84.
SIFT_FACTOR = 0.5


@dataclass(frozen=True)
class KeyRateReport:
    """Decoy-state bounds and the resulting key-rate estimate.

    Raw values are as computed (``y1_lower_raw`` may be negative, in which
    case ``e1_upper_raw`` is None and the rate reduces to the
    error-correction term).  Clamped companions are exposed as properties.
    """

    y1_lower_raw: float
    e1_upper_raw: float | None
    rate_raw: float
    insecure_flag: bool

    @property
    def y1_lower(self) -> float:
        return max(0.0, self.y1_lower_raw)

    @property
    def e1_upper(self) -> float | None:
        if self.e1_upper_raw is None:
            return None
        return min(max(self.e1_upper_raw, 0.0), 1.0)

    @property
    def rate(self) -> float:
        return max(0.0, self.rate_raw)

    @property
    def true_rate(self) -> float | None:
        """0 for attacked statistics (intercept-resend channel), else unknown."""
        return 0.0 if self.insecure_flag else None


def y1_lower(q_mu: float, q_nu: float, q_vac: float, mu: float, nu: float) -> float:
    """Weak+vacuum decoy lower bound on the single-photon yield (raw).

    Exact on two-level channels: gains of the form Q_w * e^w = Y0 + w*Y1
    return Y1 identically.  The value may be negative; callers clamp.
    """
    if not 0.0 < nu < mu:
        raise ValueError(f"decoy bound requires 0 < nu < mu, got mu={mu}, nu={nu}")
    return (mu / (mu * nu - nu**2)) * (
        q_nu * math.exp(nu)
        - q_mu * math.exp(mu) * nu**2 / mu**2
        - (mu**2 - nu**2) / mu**2 * q_vac
    )


def e1_upper(
    e_nu: float, q_nu: float, e_vac: float, q_vac: float, y1_lower: float, nu: float
) -> float | None:
    """Decoy upper bound on the single-photon error rate (raw).

    Undefined (None) when the yield bound is not positive; the key rate is
    then reported as zero.
    """
    if nu <= 0.0:
        raise ValueError(f"nu must be positive, got {nu}")
    if y1_lower <= 0.0:
        return None
    return (e_nu * q_nu * math.exp(nu) - e_vac * q_vac) / (y1_lower * nu)


def gllp_rate(
    q_mu: float,
    e_mu: float,
    mu: float,
    y1_lower: float,
    e1_upper: float | None,
    f_ec: float,
) -> float:
    """Asymptotic secret-key rate per pulse (raw, may be negative).

    Error-correction cost on the signal statistics against the
    single-photon privacy-amplification credit.  With no usable
    single-photon bound (``e1_upper`` None) only the cost term remains.
    Entropy arguments are clamped to [0, 1].
    """
    if f_ec < 1.0:
        raise ValueError(f"f_ec must be >= 1, got {f_ec}")
    cost = q_mu * f_ec * binary_entropy(min(max(e_mu, 0.0), 1.0))
    if e1_upper is None or y1_lower <= 0.0:
        return SIFT_FACTOR * -cost
    credit = (
        mu
        * math.exp(-mu)
        * y1_lower
        * (1.0 - binary_entropy(min(max(e1_upper, 0.0), 1.0)))
    )
    return SIFT_FACTOR * (credit - cost)


def key_rate_report(
    stats: ChannelStats, source: SourceParams, bob: BobParams, insecure: bool = True
) -> KeyRateReport:
    """Run the full decoy-state estimate on observed channel statistics.

    ``insecure`` marks reports produced by the attacked pipeline; the
    honest baseline passes False.
    """
    y1 = y1_lower(stats.q_mu, stats.q_nu, stats.q_vac, source.mu, source.nu)
    e1 = e1_upper(
        stats.e_nu if stats.e_nu is not None else 0.0,
        stats.q_nu,
        stats.e_vac if stats.e_vac is not None else 0.0,
        stats.q_vac,
        y1,
        source.nu,
    )
    e1_for_rate = None if e1 is None else min(max(e1, 0.0), 1.0)
    rate_raw = gllp_rate(
        stats.q_mu,
        stats.e_mu if stats.e_mu is not None else 0.0,
        source.mu,
        y1,
        e1_for_rate,
        bob.f_ec,
    )
    return KeyRateReport(
        y1_lower_raw=y1, e1_upper_raw=e1, rate_raw=rate_raw, insecure_flag=insecure
    )
