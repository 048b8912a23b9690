"""Closed-form single-pulse physics of the hybrid measurement.

The eavesdropper taps every pulse with a balanced beam splitter, interferes
the reference and signal halves on a pair of single-photon detectors, and
homodynes the remaining signal half against her own local oscillator.  For a
weak coherent pulse of intensity ``omega`` carrying encoding phase ``theta``
and global phase ``phi``, the detector click probabilities and the homodyne
outcome density have exact closed forms; the source only guarantees
``phi in [0, delta)``, so observable quantities are averages over that window.

All angles are radians.  Every function here is pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad as _quad
from scipy.special import erfc, xlogy

TWO_PI = 2.0 * math.pi

#: The four BB84 encoding phases k*pi/2, k = 0..3.
PHASE_ALPHABET = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)

#: Eve's two local-oscillator phases (her basis choice).
LO_PHASES = (0.0, math.pi / 2)


@dataclass(frozen=True)
class SourceParams:
    """Alice's source: pulse intensities and phase-randomization width.

    ``mu`` and ``nu`` are the signal and decoy mean photon numbers (the
    vacuum intensity is implicitly 0).  ``delta`` is the width of the
    phase-randomization window: the global phase is uniform on
    ``[0, delta)``, with ``delta = 2*pi`` full randomization and
    ``delta = 0`` a fixed phase.
    """

    mu: float = 0.48
    nu: float = 0.10
    delta: float = math.radians(10.0)
    phase_alphabet: tuple[float, ...] = PHASE_ALPHABET

    def __post_init__(self) -> None:
        if not 0.0 < self.nu < self.mu:
            raise ValueError(
                f"source intensities must satisfy 0 < nu < mu, got mu={self.mu}, nu={self.nu}"
            )
        if not 0.0 <= self.delta <= TWO_PI:
            raise ValueError(f"delta must lie in [0, 2*pi], got {self.delta}")
        if len(self.phase_alphabet) != 4 or any(
            not math.isclose(p, k * math.pi / 2, abs_tol=1e-12)
            for k, p in enumerate(self.phase_alphabet)
        ):
            raise ValueError("phase_alphabet must be (0, pi/2, pi, 3*pi/2)")

    @property
    def intensities(self) -> tuple[float, float, float]:
        """Signal, decoy and vacuum intensities, in that order."""
        return (self.mu, self.nu, 0.0)


@dataclass(frozen=True)
class EveParams:
    """Eve's measurement imperfections and her decision threshold.

    ``kappa_e`` scales the width and ``lambda_e`` the amplitude of the
    homodyne outcome distribution (1 = ideal).  ``x0`` is the dead-zone
    threshold: outcomes with ``|x| <= x0`` are inconclusive.  ``bs_t`` is
    the tap beam-splitter transmittance; the closed forms are derived for a
    balanced tap, so it is pinned at 1/2.
    """

    y0e: float = 0.0
    eta_e: float = 1.0
    kappa_e: float = 1.0
    lambda_e: float = 1.0
    x0: float = 1.5
    bs_t: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.y0e < 1.0:
            raise ValueError(f"y0e must lie in [0, 1), got {self.y0e}")
        if not 0.0 < self.eta_e <= 1.0:
            raise ValueError(f"eta_e must lie in (0, 1], got {self.eta_e}")
        if self.kappa_e <= 0.0:
            raise ValueError(f"kappa_e must be positive, got {self.kappa_e}")
        if self.lambda_e <= 0.0:
            raise ValueError(f"lambda_e must be positive, got {self.lambda_e}")
        if self.x0 < 0.0:
            raise ValueError(f"x0 must be non-negative, got {self.x0}")
        if self.bs_t != 0.5:
            raise ValueError(f"bs_t is fixed at 1/2, got {self.bs_t}")


@dataclass(frozen=True)
class QuadratureConfig:
    """Scheme for the phase average over [0, delta].

    The integrand is a cosine inside a Gaussian, so fixed-order
    Gauss-Legendre converges spectrally; 64 nodes are far more than enough
    for the widths of interest.  ``tail_mode="numeric"`` replaces the
    analytic erfc tail with adaptive quadrature of the density and exists
    as an independent cross-check, not for production use.
    """

    phi_nodes: int = 64
    tail_mode: str = "analytic"

    def __post_init__(self) -> None:
        if self.phi_nodes < 1:
            raise ValueError(f"phi_nodes must be >= 1, got {self.phi_nodes}")
        if self.tail_mode not in ("analytic", "numeric"):
            raise ValueError(f"tail_mode must be 'analytic' or 'numeric', got {self.tail_mode!r}")


@lru_cache(maxsize=16)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def _phi_nodes(delta: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes on [0, delta] with weights normalized by 1/delta."""
    x, w = _gauss_legendre(n)
    return 0.5 * delta * (x + 1.0), 0.5 * w


def spd_click_probs(omega: float, theta: float, eve: EveParams) -> tuple[float, float]:
    """Click probabilities of Eve's two single-photon detectors.

    The interferometer routes intensity ``omega*(1 + cos(theta))/4`` to D0
    and ``omega*(1 - cos(theta))/4`` to D1; each detector clicks unless it
    sees vacuum and no dark count.
    """
    if omega < 0.0:
        raise ValueError(f"intensity must be non-negative, got {omega}")
    scale = omega * eve.eta_e / 4.0
    p_d0 = -math.expm1(-scale * (1.0 + math.cos(theta))) * (1.0 - eve.y0e) + eve.y0e
    p_d1 = -math.expm1(-scale * (1.0 - math.cos(theta))) * (1.0 - eve.y0e) + eve.y0e
    return p_d0, p_d1


def homodyne_mean(omega: float, theta: float, phi: float, phi_e: float, eve: EveParams) -> float:
    """Mean homodyne outcome for a pulse of fixed phases."""
    if omega < 0.0:
        raise ValueError(f"intensity must be non-negative, got {omega}")
    return eve.lambda_e * math.sqrt(omega) * math.cos(theta + phi - phi_e) / 2.0


def homodyne_pdf(x, omega: float, theta: float, phi: float, phi_e: float, eve: EveParams):
    """Density of the homodyne outcome: a Gaussian of std ``kappa_e/2``.

    ``x`` may be a scalar or an array; the return matches its shape.
    """
    m = homodyne_mean(omega, theta, phi, phi_e, eve)
    k2 = eve.kappa_e**2
    return np.sqrt(2.0 / (math.pi * k2)) * np.exp(-2.0 * (np.asarray(x, dtype=float) - m) ** 2 / k2)


def homodyne_tail(
    omega: float,
    theta: float,
    phi: float,
    phi_e: float,
    x0: float,
    side: str,
    eve: EveParams,
) -> float:
    """Mass of the homodyne outcome beyond the dead zone.

    ``side="above"`` integrates the density over ``x > x0``, ``"below"``
    over ``x < -x0``; both are erfc tails of the Gaussian.
    """
    if x0 < 0.0:
        raise ValueError(f"x0 must be non-negative, got {x0}")
    m = homodyne_mean(omega, theta, phi, phi_e, eve)
    if side == "above":
        return 0.5 * float(erfc(math.sqrt(2.0) * (x0 - m) / eve.kappa_e))
    if side == "below":
        return 0.5 * float(erfc(math.sqrt(2.0) * (x0 + m) / eve.kappa_e))
    raise ValueError(f"side must be 'above' or 'below', got {side!r}")


def phase_averaged_pdf(
    x,
    omega: float,
    theta: float,
    phi_e: float,
    delta: float,
    eve: EveParams,
    quad: QuadratureConfig = QuadratureConfig(),
):
    """Homodyne outcome density averaged over the phase window [0, delta).

    For ``delta = 0`` the window degenerates and the density at ``phi = 0``
    is returned.  ``x`` may be a scalar or an array.
    """
    if not 0.0 <= delta <= TWO_PI:
        raise ValueError(f"delta must lie in [0, 2*pi], got {delta}")
    if omega < 0.0:
        raise ValueError(f"intensity must be non-negative, got {omega}")
    if delta == 0.0:
        return homodyne_pdf(x, omega, theta, 0.0, phi_e, eve)
    phis, weights = _phi_nodes(delta, quad.phi_nodes)
    xs = np.asarray(x, dtype=float)
    means = eve.lambda_e * math.sqrt(omega) * np.cos(theta + phis - phi_e) / 2.0
    k2 = eve.kappa_e**2
    vals = np.sqrt(2.0 / (math.pi * k2)) * np.exp(
        -2.0 * (xs[..., None] - means) ** 2 / k2
    )
    out = vals @ weights
    return out if out.ndim else float(out)


def phase_averaged_tail(
    omega: float,
    theta: float,
    phi_e: float,
    x0: float,
    side: str,
    delta: float,
    eve: EveParams,
    quad: QuadratureConfig = QuadratureConfig(),
) -> float:
    """Tail mass beyond the dead zone, averaged over the phase window.

    In the default analytic mode the exact erfc tail is evaluated at each
    phase node; numeric mode integrates the averaged density directly.
    """
    if not 0.0 <= delta <= TWO_PI:
        raise ValueError(f"delta must lie in [0, 2*pi], got {delta}")
    if x0 < 0.0:
        raise ValueError(f"x0 must be non-negative, got {x0}")
    if omega < 0.0:
        raise ValueError(f"intensity must be non-negative, got {omega}")
    if quad.tail_mode == "numeric":
        return _numeric_tail(omega, theta, phi_e, x0, side, delta, eve, quad)
    if delta == 0.0:
        return homodyne_tail(omega, theta, 0.0, phi_e, x0, side, eve)
    phis, weights = _phi_nodes(delta, quad.phi_nodes)
    means = eve.lambda_e * math.sqrt(omega) * np.cos(theta + phis - phi_e) / 2.0
    if side == "above":
        tails = 0.5 * erfc(math.sqrt(2.0) * (x0 - means) / eve.kappa_e)
    elif side == "below":
        tails = 0.5 * erfc(math.sqrt(2.0) * (x0 + means) / eve.kappa_e)
    else:
        raise ValueError(f"side must be 'above' or 'below', got {side!r}")
    return float(tails @ weights)


def _numeric_tail(omega, theta, phi_e, x0, side, delta, eve, quad) -> float:
    # Integration limits: the density is negligible 10 widths past the
    # farthest possible mean.
    if side not in ("above", "below"):
        raise ValueError(f"side must be 'above' or 'below', got {side!r}")
    reach = eve.lambda_e * math.sqrt(omega) / 2.0 + 10.0 * eve.kappa_e

    def density(x: float) -> float:
        return float(phase_averaged_pdf(x, omega, theta, phi_e, delta, eve, quad))

    if side == "above":
        lo, hi = x0, max(x0, reach) + 10.0 * eve.kappa_e
    else:
        hi, lo = -x0, -(max(x0, reach) + 10.0 * eve.kappa_e)
    val, _ = _quad(density, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def binary_entropy(p: float) -> float:
    """Binary Shannon entropy in bits, with H(0) = H(1) = 0."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    return float(-(xlogy(p, p) + xlogy(1.0 - p, 1.0 - p)) / math.log(2.0))
