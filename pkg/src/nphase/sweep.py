"""Sweep configuration, orchestration and CSV/SVG output."""
from __future__ import annotations

import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .exceptions import DegenerateSteadyState, MissingKey, OutOfRange, UnknownKey
from .knowledge import DEFAULT_N_GRID, KnowledgeReport, knowledge_report
from .lindblad import SystemParams, steady_state

SWEEP_VARIABLES = ("delta_p", "omega_34p")
PLOT_QUANTITIES = {"mixedness": "mixedness 1 - Tr rho^2", "r_m": "number knowledge R_m (bits)",
                   "r_phi": "phase knowledge R_phi (bits)"}
CSV_COLUMNS = ("sweep_value", "p2", "p3", "p3p", "p4p", "mixedness", "r_m", "r_phi", "status")

PARAM_KEYS = tuple(f.name for f in fields(SystemParams))
REQUIRED_PARAM_KEYS = ("omega_23p", "omega_33p", "omega_34p")
SWEEP_DEFAULTS = {"sweep_variable": "delta_p", "n_points": 401, "n_grid": DEFAULT_N_GRID,
                  "output_path": None}
REQUIRED_SWEEP_KEYS = ("start", "stop")
ALL_KEYS = PARAM_KEYS + REQUIRED_SWEEP_KEYS + tuple(SWEEP_DEFAULTS)


@dataclass(frozen=True)
class SweepConfig:
    base: SystemParams
    sweep_variable: str = "delta_p"
    start: float = -20.0
    stop: float = 20.0
    n_points: int = 401
    n_grid: int = DEFAULT_N_GRID
    output_path: Optional[str] = None
    defaulted: tuple[str, ...] = ()

    def __post_init__(self):
        if self.sweep_variable not in SWEEP_VARIABLES:
            raise OutOfRange("sweep_variable", f"must be one of {SWEEP_VARIABLES}, got {self.sweep_variable!r}")
        if self.n_points < 2:
            raise OutOfRange("n_points", f"must be >= 2, got {self.n_points}")
        if not self.start < self.stop:
            raise OutOfRange("start", f"start ({self.start}) must be below stop ({self.stop})")
        if self.sweep_variable == "omega_34p" and self.start < 0:
            raise OutOfRange("start", "a Rabi frequency sweep cannot start below 0")
        if self.n_grid < 256 or self.n_grid & (self.n_grid - 1):
            raise OutOfRange("n_grid", f"must be a power of two >= 256, got {self.n_grid}")

    def sweep_values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.n_points)


def _number(doc: dict, key: str, integer: bool = False):
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise OutOfRange(key, f"expected a number, got {value!r}")
    if integer:
        if isinstance(value, float) and not value.is_integer():
            raise OutOfRange(key, f"expected an integer, got {value!r}")
        return int(value)
    if not math.isfinite(value):
        raise OutOfRange(key, f"must be finite, got {value!r}")
    return float(value)


def _params_from_doc(doc: dict) -> tuple[SystemParams, list[str]]:
    for key in REQUIRED_PARAM_KEYS:
        if key not in doc:
            raise MissingKey(key)
    values = {k: _number(doc, k) for k in PARAM_KEYS if k in doc}
    defaulted = [k for k in PARAM_KEYS if k not in doc]
    try:
        params = SystemParams(**values)
    except ValueError as exc:
        key = str(exc).split(" ", 1)[0]
        raise OutOfRange(key, str(exc)) from None
    return params, defaulted


def _load_doc(text: str) -> dict:
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise OutOfRange("<document>", "configuration must be a flat JSON object")
    for key, value in doc.items():
        if key not in ALL_KEYS:
            raise UnknownKey(key)
        if isinstance(value, (dict, list)):
            raise OutOfRange(key, "nested values are not allowed")
    return doc


def parse_config(text: str) -> SweepConfig:
    """Parse a flat JSON sweep configuration; unknown keys are rejected."""
    doc = _load_doc(text)
    params, defaulted = _params_from_doc(doc)
    for key in REQUIRED_SWEEP_KEYS:
        if key not in doc:
            raise MissingKey(key)
    opts = {}
    for key, default in SWEEP_DEFAULTS.items():
        if key in doc:
            opts[key] = doc[key]
        else:
            opts[key] = default
            defaulted.append(key)
    if not isinstance(opts["sweep_variable"], str):
        raise OutOfRange("sweep_variable", "must be a string")
    if opts["output_path"] is not None and not isinstance(opts["output_path"], str):
        raise OutOfRange("output_path", "must be a string path")
    if "n_points" in doc:
        opts["n_points"] = _number(doc, "n_points", integer=True)
    if "n_grid" in doc:
        opts["n_grid"] = _number(doc, "n_grid", integer=True)
    return SweepConfig(base=params, start=_number(doc, "start"), stop=_number(doc, "stop"),
                       defaulted=tuple(defaulted), **opts)


def parse_params(text: str) -> SystemParams:
    """Parse only the model parameters of a config; sweep keys are allowed but ignored."""
    return _params_from_doc(_load_doc(text))[0]


BUILTIN_CONFIGS = ("fig2_row1", "fig2_row2", "fig2_row3", "fig3_row1", "fig3_row2", "fig3_row3")


def builtin_config_text(name: str) -> str:
    if name not in BUILTIN_CONFIGS:
        raise KeyError(f"no builtin config named {name!r}")
    return resources.files("nphase").joinpath("configs", f"{name}.json").read_text()


def read_config_text(path_or_name: str) -> str:
    """Read a config file, falling back to the builtin reproduction configs by name."""
    path = Path(path_or_name)
    if path.is_file():
        return path.read_text()
    if path_or_name in BUILTIN_CONFIGS:
        return builtin_config_text(path_or_name)
    raise FileNotFoundError(f"config not found: {path_or_name}")


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    report: Optional[KnowledgeReport]
    status: str = "ok"


@dataclass(frozen=True)
class SweepResult:
    sweep_variable: str
    rows: tuple[SweepRow, ...]
    metadata: dict = field(default_factory=dict)


def evaluate_point(params: SystemParams, n_grid: int = DEFAULT_N_GRID) -> KnowledgeReport:
    return knowledge_report(steady_state(params), n_grid)


def _run_point(args) -> SweepRow:
    params, value, n_grid = args
    try:
        return SweepRow(value, evaluate_point(params, n_grid))
    except DegenerateSteadyState:
        return SweepRow(value, None, "degenerate")


def run_sweep(config: SweepConfig, workers: int = 1) -> SweepResult:
    values = config.sweep_values()
    tasks = [(config.base.replace(**{config.sweep_variable: float(v)}), float(v), config.n_grid)
             for v in values]
    if workers == 1:
        rows = [_run_point(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_point, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    metadata = {
        "tool": f"nphase {__version__}",
        "params": config.base.as_dict(),
        "defaulted": list(config.defaulted),
        "sweep_variable": config.sweep_variable,
        "start": config.start,
        "stop": config.stop,
        "n_points": config.n_points,
        "n_grid": config.n_grid,
        "seed": None,
    }
    return SweepResult(config.sweep_variable, tuple(rows), metadata)


def _fmt(x: float) -> str:
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def csv_text(result: SweepResult) -> str:
    buf = io.StringIO()
    for key, value in result.metadata.items():
        buf.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for row in result.rows:
        if row.report is None:
            cells = [_fmt(row.sweep_value)] + [""] * 7 + [row.status]
        else:
            r = row.report
            cells = [_fmt(v) for v in (row.sweep_value, *r.populations, r.mixedness, r.r_m, r.r_phi)]
            cells.append(row.status)
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def emit_csv(result: SweepResult, path) -> Path:
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(csv_text(result))
    except OSError as exc:
        raise OSError(f"could not write CSV to {path}: {exc.strerror}") from exc
    return path


def emit_plot(result: SweepResult, quantity: str, path) -> Path:
    """Write a single-panel SVG line plot of ``quantity`` against the sweep variable."""
    if quantity not in PLOT_QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}; choose from {sorted(PLOT_QUANTITIES)}")
    ok = [r for r in result.rows if r.report is not None]
    if not ok:
        raise ValueError("sweep result has no successful rows to plot")

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x = [r.sweep_value for r in ok]
    y = [getattr(r.report, quantity) for r in ok]
    xlabel = {"delta_p": "probe detuning (MHz)", "omega_34p": "signal Rabi frequency (MHz)"}[result.sweep_variable]
    path = Path(path)
    with matplotlib.rc_context({"svg.hashsalt": "nphase", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(x, y, lw=1.5)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(PLOT_QUANTITIES[quantity])
        fig.tight_layout()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)
    return path
