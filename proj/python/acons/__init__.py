"""Dynamic active weighted average consensus toolkit."""

import json
from dataclasses import dataclass, field
from pathlib import Path

from ._core import (
    InvalidInput,
    ModeSchedule,
    NumericalError,
    ReferenceSignal,
    SpectralDecomposition,
    Topology,
    contains,
    eigenvalues,
    expm,
    hull_2d,
    integrate,
    is_hurwitz,
    is_schur,
    max_stable_step,
    nested_centroid,
    simulate_dt,
    spectral_decomposition,
    subsystem_matrix,
)
from . import _core

__all__ = [
    "CommandResult",
    "InvalidInput",
    "ModeSchedule",
    "NumericalError",
    "ReferenceSignal",
    "SpectralDecomposition",
    "Topology",
    "analyze",
    "certify",
    "containment",
    "contains",
    "demo",
    "demo_config",
    "eigenvalues",
    "expm",
    "hull_2d",
    "integrate",
    "is_hurwitz",
    "is_schur",
    "load_config",
    "max_stable_step",
    "nested_centroid",
    "simulate",
    "simulate_dt",
    "spectral_decomposition",
    "subsystem_matrix",
]


@dataclass
class CommandResult:
    exit_code: int
    summary: str
    report: dict
    warnings: list = field(default_factory=list)
    files: list = field(default_factory=list)

    @property
    def ok(self):
        return self.exit_code == 0


def load_config(config):
    """Validate a config (dict, JSON string or path) and return it with defaults filled in."""
    return json.loads(_core.normalize_config(_config_text(config)))


def demo_config(name):
    return json.loads(_core.demo_config(name))


def analyze(config, out_dir="out", **options):
    return _run("analyze", config, out_dir, **options)


def simulate(config, mode="ct", out_dir="out", **options):
    if mode not in ("ct", "dt"):
        raise ValueError("mode must be 'ct' or 'dt'")
    return _run("simulate-" + mode, config, out_dir, **options)


def certify(config, out_dir="out", **options):
    return _run("certify", config, out_dir, **options)


def containment(config, out_dir="out", **options):
    return _run("containment", config, out_dir, **options)


def demo(name, out_dir="out", **options):
    return _run("demo:" + name, {}, out_dir, **options)


def _config_text(config):
    if isinstance(config, dict):
        return json.dumps(config)
    if isinstance(config, Path) or (isinstance(config, str) and not config.lstrip().startswith("{")):
        return Path(config).read_text()
    return config


def _run(command, config, out_dir, seed=None, jobs=1, allow_unstable=False):
    text = "{}" if command.startswith("demo:") else _config_text(config)
    code, summary, report, warnings, files = _core.run_command(
        command, text, str(out_dir), seed, jobs, allow_unstable
    )
    return CommandResult(code, summary, json.loads(report), warnings, files)
