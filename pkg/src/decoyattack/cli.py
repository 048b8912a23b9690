"""Command-line front end.

Three subcommands share the scenario-file machinery:

* ``sweep``  - run a scenario's parameter sweep, emit CSV or JSON rows
* ``check``  - gain-ratio monitor verdict, from the pipeline or from
  externally provided gains (``--set observed.q_mu=... --set
  observed.q_nu=...``, optionally ``reference.*``)
* ``mc``     - Monte Carlo oracle run, reporting empirical statistics
  with standard errors next to the closed forms and their sigma distance

Angles are degrees at this boundary (``source.delta_deg``); exit code 0
on success, 2 on a validation error (reported as structured JSON on
stderr), 1 on I/O failure.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from typing import Any

from .attack import attack_summary
from .channel import ChannelStats, attacked_stats, honest_stats
from .montecarlo import IntensityEstimate, McConfig, estimate
from .sweep import (
    DEFAULT_SCENARIO,
    Scenario,
    ScenarioError,
    load_scenario,
    monitor_check,
    run_sweep,
    emit,
)


def _parse_set(values: list[str]) -> dict[str, Any]:
    """Parse repeated ``--set dotted.key=value`` flags."""
    out: dict[str, Any] = {}
    for item in values:
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ScenarioError("--set", f"expected key=value, got {item!r}")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        out[key] = value
    return out


def _apply_overrides(config: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    config = copy.deepcopy(config)
    for dotted, value in overrides.items():
        parts = dotted.split(".")
        node = config
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ScenarioError(dotted, f"cannot override through non-object field {part!r}")
        node[parts[-1]] = value
    return config


def _load_config(args) -> dict[str, Any]:
    if args.config is not None:
        with open(args.config) as handle:
            try:
                config = json.load(handle)
            except json.JSONDecodeError as exc:
                raise ScenarioError(str(args.config), f"not valid JSON: {exc}") from exc
        if not isinstance(config, dict):
            raise ScenarioError(str(args.config), "top level must be a JSON object")
    else:
        config = copy.deepcopy(DEFAULT_SCENARIO)
    config = _apply_overrides(config, _parse_set(args.set))
    if args.seed is not None:
        config.setdefault("mc", {})["seed"] = args.seed
    if args.samples is not None:
        config.setdefault("mc", {})["n_samples"] = args.samples
    return config


def _pop_gains(config: dict[str, Any], section: str) -> tuple[float, float] | None:
    block = config.pop(section, None)
    if block is None:
        return None
    if not isinstance(block, dict) or set(block) != {"q_mu", "q_nu"}:
        raise ScenarioError(section, "must be an object with exactly q_mu and q_nu")
    try:
        return float(block["q_mu"]), float(block["q_nu"])
    except (TypeError, ValueError) as exc:
        raise ScenarioError(section, f"gains must be numbers: {exc}") from exc


def _out_handle(args):
    if args.out is None:
        return sys.stdout, False
    return open(args.out, "w", newline=""), True


def _cmd_sweep(args) -> int:
    from .sweep import scenario_from_dict

    scenario = scenario_from_dict(_load_config(args))
    rows = run_sweep(scenario, max_workers=args.workers)
    handle, close = _out_handle(args)
    try:
        emit(rows, args.format, handle)
    finally:
        if close:
            handle.close()
    return 0


def _cmd_check(args) -> int:
    from .sweep import scenario_from_dict

    config = _load_config(args)
    observed_gains = _pop_gains(config, "observed")
    reference_gains = _pop_gains(config, "reference")
    scenario = scenario_from_dict(config)

    if observed_gains is not None:
        observed = ChannelStats(observed_gains[0], None, observed_gains[1], None, 0.0, None)
    else:
        observed, _ = attacked_stats(
            scenario.source, scenario.eve, scenario.bob, scenario.errmat, scenario.quad
        )
    if reference_gains is not None:
        reference = ChannelStats(reference_gains[0], None, reference_gains[1], None, 0.0, None)
    else:
        reference = honest_stats(
            scenario.source, scenario.bob, scenario.honest_eta_ch, scenario.honest_e_det
        )
    verdict = monitor_check(observed, reference, scenario.monitor_rel_tolerance)
    handle, close = _out_handle(args)
    try:
        json.dump(
            {
                "verdict": verdict.status,
                "observed_ratio": verdict.observed_ratio,
                "reference_ratio": verdict.reference_ratio,
                "deviation": verdict.deviation,
                "rel_tolerance": verdict.rel_tolerance,
            },
            handle,
            indent=2,
        )
        handle.write("\n")
    finally:
        if close:
            handle.close()
    return 0


def _sigma(analytic: float | None, est) -> float | None:
    if analytic is None or est is None or est.stderr == 0.0:
        return None
    return abs(est.value - analytic) / est.stderr


def _mc_record(name: str, om: float, est: IntensityEstimate, scenario: Scenario) -> dict:
    summary = attack_summary(om, scenario.source, scenario.eve, scenario.errmat, scenario.quad)
    from .channel import attacked_channel

    q, e = attacked_channel(summary, scenario.bob)
    rec: dict[str, Any] = {"intensity": name, "omega": om, "n_samples": est.n_samples}
    pairs = [
        ("p_succ", summary.p_succ, est.p_succ),
        ("e_ab", summary.e_ab, est.e_ab),
        ("e_ae", summary.e_ae, est.e_ae),
        ("q", q, est.gain),
        ("e", e, est.qber),
    ]
    for label, analytic, emp in pairs:
        rec[f"{label}_analytic"] = analytic
        rec[f"{label}_mc"] = emp.value if emp is not None else None
        rec[f"{label}_stderr"] = emp.stderr if emp is not None else None
        rec[f"{label}_sigma"] = _sigma(analytic, emp)
    return rec


def _cmd_mc(args) -> int:
    from .sweep import scenario_from_dict

    config = _load_config(args)
    config.setdefault("mc", {}).setdefault("n_samples", 100_000)
    scenario = scenario_from_dict(config)
    mc = McConfig(scenario.mc_samples, scenario.mc_seed, scenario.source.intensities)
    result = estimate(scenario.source, scenario.eve, scenario.bob, mc, scenario.errmat)
    records = [
        _mc_record(name, om, est, scenario)
        for (name, om), est in zip(
            zip(("mu", "nu", "vac"), scenario.source.intensities), result.per_intensity
        )
    ]
    handle, close = _out_handle(args)
    try:
        if args.format == "json":
            json.dump(records, handle, indent=2)
            handle.write("\n")
        else:
            import csv as _csv

            writer = _csv.DictWriter(handle, fieldnames=list(records[0]))
            writer.writeheader()
            for rec in records:
                writer.writerow({k: ("" if v is None else v) for k, v in rec.items()})
    finally:
        if close:
            handle.close()
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decoyattack",
        description="Hybrid-measurement attack pipeline for decoy-state BB84 with a partially phase-randomized source.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text, fn in (
        ("sweep", "run a scenario sweep and emit rows", _cmd_sweep),
        ("check", "gain-ratio monitor verdict", _cmd_check),
        ("mc", "Monte Carlo oracle run vs closed forms", _cmd_mc),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="scenario JSON file (default: built-in defaults)")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a scenario field, e.g. --set eve.x0=1.4",
        )
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--seed", type=int, help="Monte Carlo seed override")
        p.add_argument("--samples", type=int, help="Monte Carlo sample-count override")
        if name == "sweep":
            p.add_argument("--workers", type=int, default=None, help="sweep worker threads")
        p.set_defaults(fn=fn)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ScenarioError as exc:
        json.dump({"error": {"field": exc.field, "message": str(exc)}}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except ValueError as exc:
        json.dump({"error": {"message": str(exc)}}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except OSError as exc:
        json.dump(
            {"error": {"path": getattr(exc, "filename", None), "message": str(exc)}},
            sys.stderr,
        )
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
