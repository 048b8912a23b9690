"""Eve's decision rule and the closed-form attack statistics.

A measurement round is conclusive when the homodyne outcome clears the
dead zone on the side whose detector clicked; Eve then resends a single
photon carrying one of the four protocol phases, otherwise vacuum.  The
4x4 conditional resend matrix, her overall success probability and the
two induced error rates all follow in closed form from the single-pulse
physics in :mod:`decoyattack.optics`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .optics import (
    EveParams,
    QuadratureConfig,
    SourceParams,
    phase_averaged_tail,
    spd_click_probs,
)

_E_AB_DEFAULT = (
    (0.0, 0.5, 1.0, 0.5),
    (0.5, 0.0, 0.5, 1.0),
    (1.0, 0.5, 0.0, 0.5),
    (0.5, 1.0, 0.5, 0.0),
)
_E_AE_DEFAULT = (
    (0.0, 0.0, 1.0, 1.0),
    (0.0, 0.0, 1.0, 1.0),
    (1.0, 1.0, 0.0, 0.0),
    (1.0, 1.0, 0.0, 0.0),
)


def _frozen_matrix(rows) -> np.ndarray:
    m = np.array(rows, dtype=float)
    m.flags.writeable = False
    return m


@dataclass(frozen=True)
class ResendDecision:
    """Outcome of one measurement round: a resend phase index or vacuum.

    ``phase_index`` is k for a resend of phase k*pi/2, or None for a
    vacuum resend.
    """

    phase_index: int | None

    def __post_init__(self) -> None:
        if self.phase_index is not None and self.phase_index not in (0, 1, 2, 3):
            raise ValueError(f"phase index must be in 0..3, got {self.phase_index}")

    @property
    def is_vacuum(self) -> bool:
        return self.phase_index is None

    @classmethod
    def phase(cls, k: int) -> "ResendDecision":
        return cls(phase_index=k)

    @classmethod
    def vacuum(cls) -> "ResendDecision":
        return cls(phase_index=None)


VACUUM = ResendDecision.vacuum()


@dataclass(frozen=True)
class ErrorMatrices:
    """Per-(resend k | sent j) error rates seen by Bob and by Eve.

    ``e_ab[k][j]`` is the error rate Bob records when Eve resends phase
    k*pi/2 given Alice sent j*pi/2; ``e_ae`` is the analogous table for
    Eve's own bit.  The defaults are the canonical tables for an
    interferometric BB84 receiver; entries are restricted to {0, 1/2, 1}.
    """

    e_ab: np.ndarray = field(default_factory=lambda: _frozen_matrix(_E_AB_DEFAULT))
    e_ae: np.ndarray = field(default_factory=lambda: _frozen_matrix(_E_AE_DEFAULT))

    def __post_init__(self) -> None:
        for name in ("e_ab", "e_ae"):
            m = np.asarray(getattr(self, name), dtype=float)
            if m.shape != (4, 4):
                raise ValueError(f"{name} must be a 4x4 matrix, got shape {m.shape}")
            if not np.isin(m, (0.0, 0.5, 1.0)).all():
                raise ValueError(f"{name} entries must be in {{0, 1/2, 1}}")
            m.flags.writeable = False
            object.__setattr__(self, name, m)


DEFAULT_ERROR_MATRICES = ErrorMatrices()


@dataclass(frozen=True)
class AttackSummary:
    """Closed-form attack statistics for one pulse intensity.

    ``resend[k][j]`` is the probability that Eve resends phase k*pi/2
    given Alice sent j*pi/2.  ``e_ab``/``e_ae`` are None when the whole
    matrix vanishes (no conclusive events, so conditional errors are
    undefined); ``zero_columns`` lists any Alice phases that produced no
    conclusive events and therefore contributed 0 to the error averages.
    """

    omega: float
    resend: np.ndarray
    p_succ: float
    e_ab: float | None
    e_ae: float | None
    zero_columns: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        m = np.asarray(self.resend, dtype=float)
        m.flags.writeable = False
        object.__setattr__(self, "resend", m)


def decide_resend(
    x: float, d0_click: bool, d1_click: bool, phi_e: float, x0: float
) -> ResendDecision:
    """Map one round's homodyne outcome and detector clicks to a resend.

    A positive outcome past the dead zone together with a D0 click selects
    the phase aligned with Eve's local-oscillator setting; a negative
    outcome with a D1 click selects the opposite phase.  The state of the
    other detector is ignored.  Everything else resends vacuum.
    """
    if x0 < 0.0:
        raise ValueError(f"x0 must be non-negative, got {x0}")
    if math.isclose(phi_e, 0.0, abs_tol=1e-12):
        second_basis = False
    elif math.isclose(phi_e, math.pi / 2, abs_tol=1e-12):
        second_basis = True
    else:
        raise ValueError(f"phi_e must be 0 or pi/2, got {phi_e}")
    if x > x0 and d0_click:
        return ResendDecision.phase(1 if second_basis else 0)
    if x < -x0 and d1_click:
        return ResendDecision.phase(3 if second_basis else 2)
    return VACUUM


def resend_probs(
    omega: float,
    source: SourceParams,
    eve: EveParams,
    quad: QuadratureConfig = QuadratureConfig(),
) -> np.ndarray:
    """The 4x4 conditional resend-probability matrix for one intensity.

    Entry [k][j]: the 1/2 basis-choice factor, times the click probability
    of the detector backing resend k (D0 for k in {0,1}, D1 for k in
    {2,3}), times the phase-averaged tail on the matching side of the dead
    zone with Eve's oscillator at 0 (k even) or pi/2 (k odd), all for
    Alice's phase j*pi/2.
    """
    probs = np.zeros((4, 4))
    for j, theta in enumerate(source.phase_alphabet):
        p_d0, p_d1 = spd_click_probs(omega, theta, eve)
        for k in range(4):
            phi_e = 0.0 if k % 2 == 0 else math.pi / 2
            side = "above" if k < 2 else "below"
            click = p_d0 if k < 2 else p_d1
            tail = phase_averaged_tail(
                omega, theta, phi_e, eve.x0, side, source.delta, eve, quad
            )
            probs[k, j] = 0.5 * click * tail
    return probs


def attack_summary(
    omega: float,
    source: SourceParams,
    eve: EveParams,
    errmat: ErrorMatrices = DEFAULT_ERROR_MATRICES,
    quad: QuadratureConfig = QuadratureConfig(),
) -> AttackSummary:
    """Success probability and both error rates for one intensity.

    The success probability averages the resend matrix over Alice's
    uniform phase choice; each error rate averages the per-phase
    conditional error over Alice's phases, with phases that yielded no
    conclusive events contributing 0 (and being reported).
    """
    probs = resend_probs(omega, source, eve, quad)
    col_totals = probs.sum(axis=0)
    p_succ = float(probs.sum() / 4.0)
    zero_columns = tuple(int(j) for j in range(4) if col_totals[j] == 0.0)
    if p_succ == 0.0:
        return AttackSummary(
            omega=omega, resend=probs, p_succ=0.0, e_ab=None, e_ae=None,
            zero_columns=zero_columns,
        )
    e_ab = e_ae = 0.0
    for j in range(4):
        if col_totals[j] == 0.0:
            continue
        e_ab += float(probs[:, j] @ errmat.e_ab[:, j]) / float(col_totals[j])
        e_ae += float(probs[:, j] @ errmat.e_ae[:, j]) / float(col_totals[j])
    return AttackSummary(
        omega=omega,
        resend=probs,
        p_succ=p_succ,
        e_ab=e_ab / 4.0,
        e_ae=e_ae / 4.0,
        zero_columns=zero_columns,
    )
