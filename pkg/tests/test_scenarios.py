"""The bundled scenario files are valid and carry the canonical defaults."""

import json
import math
from pathlib import Path

from decoyattack import DEFAULT_SCENARIO, SweepGrid, load_scenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def test_default_scenario_file_matches_builtin():
    on_disk = json.loads((SCENARIOS / "default.json").read_text())
    assert on_disk == DEFAULT_SCENARIO


def test_default_scenario_loads_with_canonical_values():
    scenario = load_scenario(SCENARIOS / "default.json")
    assert scenario.source.mu == 0.48
    assert scenario.source.nu == 0.10
    assert math.isclose(scenario.source.delta, math.radians(10.0))
    assert scenario.bob.f_ec == 1.22
    assert scenario.bob.y0 == 1.7e-6
    assert scenario.bob.eta_bob == 0.045
    assert scenario.eve.x0 == 1.5
    assert scenario.eve.y0e == 0.0 and scenario.eve.eta_e == 1.0
    assert scenario.eve.kappa_e == 1.0 and scenario.eve.lambda_e == 1.0


def test_intensity_grid_scenario_loads():
    scenario = load_scenario(SCENARIOS / "intensity_grid.json")
    assert isinstance(scenario.sweep, SweepGrid)
    assert len(scenario.sweep.values()) > 50


def test_oracle_scenario_attaches_monte_carlo():
    scenario = load_scenario(SCENARIOS / "oracle_check.json")
    assert scenario.mc_samples == 1_000_000
    assert scenario.mc_seed == 20260809
    assert scenario.sweep.values() == [1.5]
