"""Simulator abstraction: toy model, external adapter, batch runner, persistence."""

from absa.sim_harness.batch import execute_batch, run_one
from absa.sim_harness.external import parse_output, render_command, run_external
from absa.sim_harness.seeds import derive_seed, value_label
from absa.sim_harness.store import CampaignStore, load_records, save_records
from absa.sim_harness.toy import CALIBRATED, ToyModelParams, hill_effect, simulate_toy
from absa.sim_harness.types import (
    TOY_OUTPUTS,
    TOY_PARAMETERS,
    RunRecord,
    RunRequest,
    SimulatorSpec,
)

__all__ = [
    "CALIBRATED",
    "CampaignStore",
    "RunRecord",
    "RunRequest",
    "SimulatorSpec",
    "TOY_OUTPUTS",
    "TOY_PARAMETERS",
    "ToyModelParams",
    "derive_seed",
    "execute_batch",
    "hill_effect",
    "load_records",
    "parse_output",
    "render_command",
    "run_external",
    "run_one",
    "save_records",
    "simulate_toy",
    "value_label",
]
