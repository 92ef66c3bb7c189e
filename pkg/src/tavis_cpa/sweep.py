"""Parameter sweeps over detuning, relative input phase, or DDI strength."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .cpa import detuning_map
from .errors import PreconditionError
from .model import DriveConfig, SystemParams, ensure_valid
from .steady_state import observables_from_fields, steady_state_grid

VARIABLES = ("detuning", "phase", "ddi")
MODES = ("two-input-equal", "single-input-left", "single-input-right")
COLUMNS = ("x", "out_l", "out_r", "cavity", "atoms")
CHUNK = 4096
THREADS_ENV = "TAVIS_CPA_THREADS"
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class SweepSpec:
    """A uniform, endpoint-inclusive scan.

    ``coupling_lock`` only matters for detuning scans: when False the cavity
    and both emitters all sit at the scanned Delta; when True the
    emitter-cavity offsets of the parameters are held fixed and ``axis``
    picks whether Delta is the cavity ("cavity") or the emitter ("emitter")
    detuning.
    """

    variable: str
    start: float
    stop: float
    points: int
    mode: str = "two-input-equal"
    coupling_lock: bool = False
    axis: str = "cavity"

    def __post_init__(self) -> None:
        if self.variable not in VARIABLES:
            raise ValueError(f"variable must be one of {VARIABLES}, got {self.variable!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.axis not in ("cavity", "emitter"):
            raise ValueError(f"axis must be 'cavity' or 'emitter', got {self.axis!r}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)) or not self.start < self.stop:
            raise ValueError(f"need finite start < stop, got {self.start}, {self.stop}")
        if int(self.points) != self.points or self.points < 2:
            raise ValueError(f"points must be an integer >= 2, got {self.points}")

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.points))


@dataclass
class SweepTable:
    spec: SweepSpec
    params: SystemParams
    rows: np.ndarray                       # (points, 5) in COLUMNS order
    flags: list[str] = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, COLUMNS.index(name)]

    @property
    def x(self) -> np.ndarray:
        return self.rows[:, 0]

    def to_dict(self) -> dict:
        p = self.params.as_dict()
        for k in ("g1", "g2"):
            p[k] = [p[k].real, p[k].imag]
        return {"spec": asdict(self.spec), "params": p, "columns": list(COLUMNS),
                "rows": self.rows.tolist(), "flags": list(self.flags)}


def _worker_count(n_chunks: int) -> int:
    env = os.environ.get(THREADS_ENV)
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(cap, n_chunks))


def _evaluate(x: np.ndarray, fn) -> np.ndarray:
    """Apply ``fn`` (grid slice -> (n, 4) observables) chunk-wise, preserving order."""
    chunks = [x[i:i + CHUNK] for i in range(0, len(x), CHUNK)]
    workers = _worker_count(len(chunks))
    if workers == 1:
        parts = [fn(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, chunks))
    return np.column_stack([x, np.concatenate(parts)])


def mode_drive(drive: DriveConfig, mode: str) -> DriveConfig:
    """The drive actually applied in a sweep mode."""
    if mode == "two-input-equal":
        if drive.amp_l != drive.amp_r or drive.amp_l == 0.0:
            raise PreconditionError("two-input-equal mode needs equal nonzero amplitudes")
        return drive
    if mode == "single-input-left":
        amp = drive.amp_l or drive.amp_r
        return DriveConfig(amp, 0.0, drive.phase_l, 0.0)
    if mode == "single-input-right":
        amp = drive.amp_r or drive.amp_l
        return DriveConfig(0.0, amp, 0.0, drive.phase_r)
    raise ValueError(f"unknown mode {mode!r}")


def _stack(fields, drive):
    return np.column_stack(observables_from_fields(fields, drive))


def sweep_detuning(params: SystemParams, drive: DriveConfig, spec: SweepSpec) -> SweepTable:
    """Observables versus laser detuning."""
    if spec.variable != "detuning":
        raise ValueError("spec.variable must be 'detuning'")
    ensure_valid(params)
    drv = mode_drive(drive, spec.mode)

    def fn(x):
        if spec.coupling_lock:
            dc, d1, d2 = detuning_map(params, x, spec.axis)
        else:
            dc = d1 = d2 = x
        return _stack(steady_state_grid(params, drv, delta_c=dc, delta_eg1=d1, delta_eg2=d2), drv)

    return SweepTable(spec, params, _evaluate(spec.grid(), fn))


def sweep_ddi(params: SystemParams, drive: DriveConfig, spec: SweepSpec) -> SweepTable:
    """Observables versus DDI strength J at the detunings of ``params``."""
    if spec.variable != "ddi":
        raise ValueError("spec.variable must be 'ddi'")
    ensure_valid(params)
    drv = mode_drive(drive, spec.mode)
    return SweepTable(spec, params, _evaluate(
        spec.grid(), lambda x: _stack(steady_state_grid(params, drv, J=x), drv)))


def sweep_phase(params: SystemParams, spec: SweepSpec, amp: float = 1.0) -> SweepTable:
    """Observables versus relative input phase phi_l - phi_r, equal amplitudes.

    Flags the table when the two output channels differ by more than
    1e-12; they coincide only where the cavity response factor is real
    (e.g. at a CPA point), otherwise out_l(dphi) = out_r(-dphi).
    """
    if spec.variable != "phase":
        raise ValueError("spec.variable must be 'phase'")
    if spec.mode != "two-input-equal":
        raise PreconditionError("phase sweeps need equal input amplitudes (two-input-equal)")
    if spec.start < -2 * math.pi - 1e-12 or spec.stop > 2 * math.pi + 1e-12:
        raise ValueError("phase grid must lie within [-2 pi, 2 pi]")
    ensure_valid(params)

    # the drive phase only enters through a scalar factor, so evaluate per point
    def fn(x):
        out = np.empty((len(x), 4))
        for k, dphi in enumerate(x):
            drv = DriveConfig(amp, amp, float(dphi), 0.0)
            out[k] = _stack(steady_state_grid(params, drv), drv)[0]
        return out

    table = SweepTable(spec, params, _evaluate(spec.grid(), fn))
    gap = float(np.max(np.abs(table.column("out_l") - table.column("out_r"))))
    if gap > SYMMETRY_TOL:
        table.flags.append(f"output channels differ (max |out_l - out_r| = {gap:.3g})")
    return table


def run_sweep(params: SystemParams, drive: DriveConfig, spec: SweepSpec) -> SweepTable:
    if spec.variable == "detuning":
        return sweep_detuning(params, drive, spec)
    if spec.variable == "ddi":
        return sweep_ddi(params, drive, spec)
    return sweep_phase(params, spec, amp=drive.amp_l or 1.0)
