"""Scenario configuration, parameter sweeps and machine-readable output.

A scenario bundles the source, eavesdropper and receiver parameters with a
sweep specification: either one axis (``x0``, ``delta``, ``mu`` or ``nu``)
or a ``mu`` x ``nu`` grid.  Each sweep point runs the full analytic
pipeline (optics -> attack -> channel -> decoy estimate), computes the
equivalent channel length and the gain-ratio monitor verdict, and can
optionally attach Monte Carlo estimates.  Scenario files are JSON with
angles in degrees; angles are radians everywhere inside the library.

CSV output uses the fixed column set
``Q_mu,E_mu,Q_nu,E_nu,Q_vac,E_vac,P_succ_mu,e_ab_mu,e_ae_mu,Y1_lower,
e1_upper,rate_raw,rate,equiv_len_km,monitor,insecure`` preceded by the
swept variable(s); JSON output is an array of objects with the same field
names.  Absent values serialize as empty cells (CSV) or null (JSON).
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from .attack import DEFAULT_ERROR_MATRICES, AttackSummary, ErrorMatrices
from .channel import (
    BobParams,
    ChannelStats,
    FIBER_LOSS_DB_PER_KM,
    attacked_stats,
    equivalent_length,
    honest_stats,
)
from .decoy import KeyRateReport, key_rate_report
from .montecarlo import McConfig, McEstimate, estimate
from .optics import EveParams, QuadratureConfig, SourceParams

SWEEP_VARIABLES = ("x0", "delta", "mu", "nu")

#: Fixed data columns following the swept variable(s).
DATA_COLUMNS = (
    "Q_mu", "E_mu", "Q_nu", "E_nu", "Q_vac", "E_vac",
    "P_succ_mu", "e_ab_mu", "e_ae_mu",
    "Y1_lower", "e1_upper", "rate_raw", "rate",
    "equiv_len_km", "monitor", "insecure",
)


class ScenarioError(ValueError):
    """A scenario field failed validation; ``field`` names the offender."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


@dataclass(frozen=True)
class SweepAxis:
    """A single swept variable over an inclusive, stepped range."""

    variable: str
    start: float
    stop: float
    step: float

    def __post_init__(self) -> None:
        if self.variable not in SWEEP_VARIABLES:
            raise ScenarioError("sweep.variable", f"must be one of {SWEEP_VARIABLES}, got {self.variable!r}")
        for name in ("start", "stop", "step"):
            if not math.isfinite(getattr(self, name)):
                raise ScenarioError(f"sweep.{name}", "must be finite")
        if self.step <= 0.0:
            raise ScenarioError("sweep.step", f"must be positive, got {self.step}")
        if self.stop < self.start:
            raise ScenarioError("sweep.stop", f"must be >= start, got start={self.start}, stop={self.stop}")

    def values(self) -> list[float]:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        # rounding keeps human-entered steps exact in the serialized output
        return [round(self.start + i * self.step, 12) for i in range(n)]


@dataclass(frozen=True)
class SweepGrid:
    """A mu x nu grid; pairs violating nu < mu are skipped."""

    mu_start: float
    mu_stop: float
    mu_step: float
    nu_start: float
    nu_stop: float
    nu_step: float

    def __post_init__(self) -> None:
        for axis in ("mu", "nu"):
            start = getattr(self, f"{axis}_start")
            stop = getattr(self, f"{axis}_stop")
            step = getattr(self, f"{axis}_step")
            if not all(math.isfinite(v) for v in (start, stop, step)):
                raise ScenarioError(f"sweep.grid.{axis}", "range values must be finite")
            if step <= 0.0:
                raise ScenarioError(f"sweep.grid.{axis}", f"step must be positive, got {step}")
            if stop < start:
                raise ScenarioError(f"sweep.grid.{axis}", f"stop must be >= start, got [{start}, {stop}]")

    def values(self) -> list[tuple[float, float]]:
        mu_axis = SweepAxis("mu", self.mu_start, self.mu_stop, self.mu_step).values()
        nu_axis = SweepAxis("nu", self.nu_start, self.nu_stop, self.nu_step).values()
        pairs = [(m, n) for m in mu_axis for n in nu_axis if n < m]
        if not pairs:
            raise ScenarioError("sweep.grid", "no grid point satisfies nu < mu")
        return pairs


@dataclass(frozen=True)
class MonitorVerdict:
    """Outcome of the gain-ratio countermeasure check."""

    status: str  # "alarm" | "ok" | "undetermined"
    observed_ratio: float | None
    reference_ratio: float | None
    deviation: float | None
    rel_tolerance: float


@dataclass(frozen=True)
class Scenario:
    """Everything needed to run one sweep."""

    source: SourceParams = SourceParams()
    eve: EveParams = EveParams()
    bob: BobParams = BobParams()
    quad: QuadratureConfig = QuadratureConfig()
    errmat: ErrorMatrices = DEFAULT_ERROR_MATRICES
    sweep: SweepAxis | SweepGrid = SweepAxis("x0", 1.0, 2.0, 0.01)
    honest_eta_ch: float = 1.0
    honest_e_det: float = 0.0
    monitor_rel_tolerance: float = 0.2
    fiber_loss_db_per_km: float = FIBER_LOSS_DB_PER_KM
    mc_samples: int | None = None
    mc_seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.honest_eta_ch <= 1.0:
            raise ScenarioError("honest.eta_ch", f"must lie in (0, 1], got {self.honest_eta_ch}")
        if not 0.0 <= self.honest_e_det <= 0.5:
            raise ScenarioError("honest.e_det", f"must lie in [0, 1/2], got {self.honest_e_det}")
        if self.monitor_rel_tolerance <= 0.0:
            raise ScenarioError("monitor_rel_tolerance", f"must be positive, got {self.monitor_rel_tolerance}")
        if self.fiber_loss_db_per_km <= 0.0:
            raise ScenarioError("fiber_loss_db_per_km", f"must be positive, got {self.fiber_loss_db_per_km}")
        if self.mc_samples is not None and self.mc_samples < 1:
            raise ScenarioError("mc.n_samples", f"must be >= 1, got {self.mc_samples}")


@dataclass(frozen=True)
class SweepRow:
    """One sweep point: the swept value(s) plus the fixed data columns.

    Attack summaries for all intensities, the full key-rate report, the
    monitor detail and any Monte Carlo estimate ride along for library
    users; serialization sticks to the documented columns.
    """

    swept: tuple[tuple[str, float], ...]
    q_mu: float
    e_mu: float | None
    q_nu: float
    e_nu: float | None
    q_vac: float
    e_vac: float | None
    p_succ_mu: float
    e_ab_mu: float | None
    e_ae_mu: float | None
    y1_lower: float
    e1_upper: float | None
    rate_raw: float
    rate: float
    equiv_len_km: float
    monitor: str
    insecure: bool
    summaries: dict[str, AttackSummary] = dataclasses.field(repr=False, default_factory=dict)
    report: KeyRateReport | None = dataclasses.field(repr=False, default=None)
    monitor_detail: MonitorVerdict | None = dataclasses.field(repr=False, default=None)
    mc: McEstimate | None = dataclasses.field(repr=False, default=None)

    def as_record(self) -> dict[str, Any]:
        """The serialized fields, in column order."""
        rec: dict[str, Any] = {name: value for name, value in self.swept}
        rec.update(
            Q_mu=self.q_mu, E_mu=self.e_mu, Q_nu=self.q_nu, E_nu=self.e_nu,
            Q_vac=self.q_vac, E_vac=self.e_vac,
            P_succ_mu=self.p_succ_mu, e_ab_mu=self.e_ab_mu, e_ae_mu=self.e_ae_mu,
            Y1_lower=self.y1_lower, e1_upper=self.e1_upper,
            rate_raw=self.rate_raw, rate=self.rate,
            equiv_len_km=self.equiv_len_km, monitor=self.monitor,
            insecure=self.insecure,
        )
        return rec


def monitor_check(
    attacked: ChannelStats, honest: ChannelStats, rel_tolerance: float = 0.2
) -> MonitorVerdict:
    """Compare the observed signal/decoy gain ratio against the honest one.

    Raises the alarm when the observed ratio deviates from the reference
    by more than ``rel_tolerance`` (relative).  Any vanishing gain makes
    the ratio, and hence the verdict, undetermined.
    """
    if rel_tolerance <= 0.0:
        raise ValueError(f"rel_tolerance must be positive, got {rel_tolerance}")
    if attacked.q_nu == 0.0 or honest.q_nu == 0.0 or honest.q_mu == 0.0:
        return MonitorVerdict("undetermined", None, None, None, rel_tolerance)
    observed = attacked.q_mu / attacked.q_nu
    reference = honest.q_mu / honest.q_nu
    deviation = abs(observed - reference) / reference
    status = "alarm" if deviation > rel_tolerance else "ok"
    return MonitorVerdict(status, observed, reference, deviation, rel_tolerance)


def _point_params(
    scenario: Scenario, point: float | tuple[float, float]
) -> tuple[tuple[tuple[str, float], ...], SourceParams, EveParams]:
    sweep = scenario.sweep
    if isinstance(sweep, SweepGrid):
        mu, nu = point
        try:
            source = dataclasses.replace(scenario.source, mu=mu, nu=nu)
        except ValueError as exc:
            raise ScenarioError("sweep.grid", str(exc)) from exc
        return (("mu", mu), ("nu", nu)), source, scenario.eve
    value = point
    try:
        if sweep.variable == "x0":
            return (("x0", value),), scenario.source, dataclasses.replace(scenario.eve, x0=value)
        if sweep.variable == "delta":
            source = dataclasses.replace(scenario.source, delta=math.radians(value))
            return (("delta_deg", value),), source, scenario.eve
        if sweep.variable == "mu":
            source = dataclasses.replace(scenario.source, mu=value)
            return (("mu", value),), source, scenario.eve
        source = dataclasses.replace(scenario.source, nu=value)
        return (("nu", value),), source, scenario.eve
    except ValueError as exc:
        raise ScenarioError(f"sweep.{sweep.variable}", str(exc)) from exc


def _evaluate_point(
    scenario: Scenario, index: int, point: float | tuple[float, float]
) -> SweepRow:
    swept, source, eve = _point_params(scenario, point)
    stats, summaries = attacked_stats(source, eve, scenario.bob, scenario.errmat, scenario.quad)
    report = key_rate_report(stats, source, scenario.bob, insecure=True)
    honest = honest_stats(source, scenario.bob, scenario.honest_eta_ch, scenario.honest_e_det)
    verdict = monitor_check(stats, honest, scenario.monitor_rel_tolerance)
    length = equivalent_length(
        stats.q_mu, source.mu, scenario.bob.eta_bob, scenario.fiber_loss_db_per_km
    )
    mc_estimate = None
    if scenario.mc_samples is not None:
        # decorrelate points; streams inside are seeded per (seed, intensity, stream)
        point_seed = int(np.random.SeedSequence((scenario.mc_seed, index)).generate_state(1, np.uint64)[0])
        mc_estimate = estimate(
            source,
            eve,
            scenario.bob,
            McConfig(scenario.mc_samples, point_seed, source.intensities),
            scenario.errmat,
        )
    summary_mu = summaries["mu"]
    return SweepRow(
        swept=swept,
        q_mu=stats.q_mu, e_mu=stats.e_mu,
        q_nu=stats.q_nu, e_nu=stats.e_nu,
        q_vac=stats.q_vac, e_vac=stats.e_vac,
        p_succ_mu=summary_mu.p_succ, e_ab_mu=summary_mu.e_ab, e_ae_mu=summary_mu.e_ae,
        y1_lower=report.y1_lower_raw, e1_upper=report.e1_upper_raw,
        rate_raw=report.rate_raw, rate=report.rate,
        equiv_len_km=length,
        monitor=verdict.status,
        insecure=True,
        summaries=summaries,
        report=report,
        monitor_detail=verdict,
        mc=mc_estimate,
    )


def run_sweep(scenario: Scenario, max_workers: int | None = None) -> list[SweepRow]:
    """Evaluate every sweep point; output order follows the sweep spec.

    Points are independent and evaluated on a bounded thread pool;
    assembly is by point index, so results do not depend on scheduling.
    """
    points = scenario.sweep.values()
    if max_workers is None:
        max_workers = min(8, os.cpu_count() or 1)
    if max_workers <= 1 or len(points) <= 1:
        return [_evaluate_point(scenario, i, p) for i, p in enumerate(points)]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(lambda ip: _evaluate_point(scenario, *ip), enumerate(points)))


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return f"{value:.12e}"
    return str(value)


def emit(rows: list[SweepRow], format: str, destination) -> None:
    """Write sweep rows as CSV or JSON.

    ``destination`` may be a path or a writable text file object.  CSV
    carries one fixed header row and at least 12 significant digits per
    number; JSON is an array of objects with the same field names.
    """
    if not rows:
        raise ValueError("rows must be non-empty")
    if format not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")
    swept_names = [name for name, _ in rows[0].swept]
    for row in rows:
        if [name for name, _ in row.swept] != swept_names:
            raise ValueError("all rows must share the same swept variables")

    if hasattr(destination, "write"):
        _write(rows, format, destination, swept_names)
        return
    path = Path(destination)
    with open(path, "w", newline="") as handle:
        _write(rows, format, handle, swept_names)


def _write(rows: list[SweepRow], format: str, handle: io.TextIOBase, swept_names: list[str]) -> None:
    header = swept_names + list(DATA_COLUMNS)
    if format == "csv":
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            rec = row.as_record()
            writer.writerow([_format_cell(rec[name]) for name in header])
    else:
        json.dump([row.as_record() for row in rows], handle, indent=2)
        handle.write("\n")


# --------------------------------------------------------------------------
# Scenario files.  JSON, angles in degrees; see README for the full schema.
# --------------------------------------------------------------------------

#: Bundled defaults: the canonical experiment parameters (signal 0.48,
#: decoy 0.10, 10-degree randomization window, f=1.22, Y0=1.7e-6,
#: eta_bob=0.045, ideal eavesdropper hardware) and a threshold sweep.
DEFAULT_SCENARIO: dict[str, Any] = {
    "source": {"mu": 0.48, "nu": 0.10, "delta_deg": 10.0},
    "eve": {"y0e": 0.0, "eta_e": 1.0, "kappa_e": 1.0, "lambda_e": 1.0, "x0": 1.5},
    "bob": {"y0": 1.7e-6, "eta_bob": 0.045, "f_ec": 1.22},
    "quad": {"phi_nodes": 64, "tail_mode": "analytic"},
    "honest": {"eta_ch": 1.0, "e_det": 0.0},
    "monitor_rel_tolerance": 0.2,
    "fiber_loss_db_per_km": 0.21,
    "sweep": {"variable": "x0", "start": 1.0, "stop": 2.0, "step": 0.01},
}

_SECTION_KEYS = {
    "source": {"mu", "nu", "delta_deg"},
    "eve": {"y0e", "eta_e", "kappa_e", "lambda_e", "x0"},
    "bob": {"y0", "eta_bob", "f_ec"},
    "quad": {"phi_nodes", "tail_mode"},
    "honest": {"eta_ch", "e_det"},
    "mc": {"n_samples", "seed"},
}
_TOP_KEYS = set(_SECTION_KEYS) | {"sweep", "monitor_rel_tolerance", "fiber_loss_db_per_km"}


def _number(section: dict, path: str, key: str, default: float) -> float:
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        field = f"{path}.{key}" if path else key
        raise ScenarioError(field, f"must be a number, got {value!r}")
    return float(value)


def _check_keys(section: dict, path: str, allowed: set[str]) -> None:
    for key in section:
        if key not in allowed:
            raise ScenarioError(f"{path}.{key}", "unknown field")


def _parse_sweep(spec: Any) -> SweepAxis | SweepGrid:
    if not isinstance(spec, dict):
        raise ScenarioError("sweep", f"must be an object, got {spec!r}")
    if "grid" in spec:
        _check_keys(spec, "sweep", {"grid"})
        grid = spec["grid"]
        if not isinstance(grid, dict):
            raise ScenarioError("sweep.grid", f"must be an object, got {grid!r}")
        _check_keys(grid, "sweep.grid", {"mu", "nu"})
        ranges = {}
        for axis in ("mu", "nu"):
            r = grid.get(axis)
            if not (isinstance(r, (list, tuple)) and len(r) == 3):
                raise ScenarioError(f"sweep.grid.{axis}", f"must be [start, stop, step], got {r!r}")
            ranges[axis] = [float(v) for v in r]
        return SweepGrid(*ranges["mu"], *ranges["nu"])
    _check_keys(spec, "sweep", {"variable", "start", "stop", "step"})
    variable = spec.get("variable")
    if variable not in SWEEP_VARIABLES:
        raise ScenarioError("sweep.variable", f"must be one of {SWEEP_VARIABLES}, got {variable!r}")
    axis = SweepAxis(
        variable,
        _number(spec, "sweep", "start", math.nan),
        _number(spec, "sweep", "stop", math.nan),
        _number(spec, "sweep", "step", math.nan),
    )
    if variable == "delta" and not (0.0 <= axis.start and axis.stop <= 360.0):
        raise ScenarioError("sweep.start", "delta sweep must stay within [0, 360] degrees")
    return axis


def scenario_from_dict(config: dict[str, Any]) -> Scenario:
    """Build and validate a Scenario from a parsed config mapping."""
    _check_keys(config, "config", _TOP_KEYS)
    for name in _SECTION_KEYS:
        section = config.get(name, {})
        if not isinstance(section, dict):
            raise ScenarioError(name, f"must be an object, got {section!r}")
        _check_keys(section, name, _SECTION_KEYS[name])

    src = config.get("source", {})
    delta_deg = _number(src, "source", "delta_deg", 10.0)
    if not 0.0 <= delta_deg <= 360.0:
        raise ScenarioError("source.delta_deg", f"must lie in [0, 360], got {delta_deg}")
    mu = _number(src, "source", "mu", 0.48)
    nu = _number(src, "source", "nu", 0.10)
    if not 0.0 < nu < mu:
        raise ScenarioError("source.nu", f"must satisfy 0 < nu < mu, got mu={mu}, nu={nu}")
    source = SourceParams(mu=mu, nu=nu, delta=math.radians(delta_deg))

    ev = config.get("eve", {})
    x0 = _number(ev, "eve", "x0", 1.5)
    if x0 < 0.0:
        raise ScenarioError("eve.x0", f"must be non-negative, got {x0}")
    try:
        eve = EveParams(
            y0e=_number(ev, "eve", "y0e", 0.0),
            eta_e=_number(ev, "eve", "eta_e", 1.0),
            kappa_e=_number(ev, "eve", "kappa_e", 1.0),
            lambda_e=_number(ev, "eve", "lambda_e", 1.0),
            x0=x0,
        )
    except ValueError as exc:
        raise ScenarioError("eve", str(exc)) from exc

    bo = config.get("bob", {})
    try:
        bob = BobParams(
            y0=_number(bo, "bob", "y0", 1.7e-6),
            eta_bob=_number(bo, "bob", "eta_bob", 0.045),
            f_ec=_number(bo, "bob", "f_ec", 1.22),
        )
    except ValueError as exc:
        raise ScenarioError("bob", str(exc)) from exc

    qu = config.get("quad", {})
    phi_nodes = qu.get("phi_nodes", 64)
    if isinstance(phi_nodes, bool) or not isinstance(phi_nodes, int):
        raise ScenarioError("quad.phi_nodes", f"must be an integer, got {phi_nodes!r}")
    try:
        quad = QuadratureConfig(phi_nodes=phi_nodes, tail_mode=qu.get("tail_mode", "analytic"))
    except ValueError as exc:
        raise ScenarioError("quad", str(exc)) from exc

    ho = config.get("honest", {})
    mc = config.get("mc", {})
    mc_samples = mc.get("n_samples")
    if mc_samples is not None and (isinstance(mc_samples, bool) or not isinstance(mc_samples, int)):
        raise ScenarioError("mc.n_samples", f"must be an integer, got {mc_samples!r}")
    mc_seed = mc.get("seed", 0)
    if isinstance(mc_seed, bool) or not isinstance(mc_seed, int):
        raise ScenarioError("mc.seed", f"must be an integer, got {mc_seed!r}")

    return Scenario(
        source=source,
        eve=eve,
        bob=bob,
        quad=quad,
        sweep=_parse_sweep(config.get("sweep", DEFAULT_SCENARIO["sweep"])),
        honest_eta_ch=_number(ho, "honest", "eta_ch", 1.0),
        honest_e_det=_number(ho, "honest", "e_det", 0.0),
        monitor_rel_tolerance=_number(config, "", "monitor_rel_tolerance", 0.2),
        fiber_loss_db_per_km=_number(config, "", "fiber_loss_db_per_km", 0.21),
        mc_samples=mc_samples,
        mc_seed=mc_seed,
    )


def load_scenario(path) -> Scenario:
    """Load and validate a JSON scenario file."""
    with open(path) as handle:
        try:
            config = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ScenarioError(str(path), f"not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ScenarioError(str(path), "top level must be a JSON object")
    return scenario_from_dict(config)
