"""Coherent perfect absorption: exact conditions, analytic roots, numeric minima."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .model import DriveConfig, SystemParams, require_symmetric
from .steady_state import observables_from_fields, solve_steady_state, steady_state_grid

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CpaResidual:
    r1: float
    r2: float

    @property
    def total(self) -> float:
        return abs(self.r1) + abs(self.r2)


@dataclass(frozen=True)
class CpaSolution:
    delta_eg: float
    delta_c: float
    branch: str

    @property
    def delta_ac(self) -> float:
        return self.delta_eg - self.delta_c

    def apply(self, params: SystemParams) -> SystemParams:
        """``params`` moved onto this CPA point."""
        return params.replace(delta_c=self.delta_c, delta_eg1=self.delta_eg,
                              delta_eg2=self.delta_eg)


@dataclass(frozen=True)
class AbsorptionMinimum:
    delta: float
    depth: float
    merged: bool = False


def cpa_residuals(params: SystemParams) -> CpaResidual:
    """Real and imaginary parts of the equal-drive zero-output condition.

    r1 = kappa (gamma^2 + J^2 - Deg^2) + 2 Dc Deg gamma - 2 g^2 gamma
    r2 = 2 kappa gamma Deg - Dc (gamma^2 + J^2 - Deg^2) - 2 g^2 (Deg - J)

    Both vanish exactly when equal inputs leave both outputs dark.
    """
    require_symmetric(params)
    kappa, gamma, J = params.kappa_l, params.gamma1, params.J
    g = params.g1.real
    d_eg, d_c = params.delta_eg1, params.delta_c
    p = -d_eg * d_eg + gamma * gamma + J * J
    r1 = kappa * p + 2.0 * d_c * d_eg * gamma - 2.0 * g * g * gamma
    r2 = 2.0 * kappa * gamma * d_eg - d_c * p - 2.0 * g * g * (d_eg - J)
    return CpaResidual(r1, r2)


def cpa_detuning_solutions(g: float, gamma: float, kappa: float, J: float) -> list[CpaSolution]:
    """Real detuning pairs that satisfy both CPA conditions.

    Deg = -J + s sqrt(2 g^2 gamma / kappa - gamma^2),
    Dc  =      s sqrt(2 g^2 kappa / gamma - kappa^2),   s = +1 or -1.

    The mixed-sign pairings do not satisfy the conditions and the remaining
    roots of the quartic system are complex, so at most two solutions are
    returned. An empty list means no CPA exists (weak coupling).
    """
    if not (g > 0 and gamma > 0 and kappa > 0):
        raise ValueError("g, gamma and kappa must be > 0")
    rad_eg = 2.0 * g * g * gamma / kappa - gamma * gamma
    rad_c = 2.0 * g * g * kappa / gamma - kappa * kappa
    if rad_eg < 0.0 or rad_c < 0.0:
        return []
    s_eg, s_c = math.sqrt(rad_eg), math.sqrt(rad_c)
    return [CpaSolution(-J + s_eg, s_c, "(+,-)"),
            CpaSolution(-J - s_eg, -s_c, "(-,+)")]


def single_input_scattering(params: SystemParams, side: str = "left") -> tuple[complex, complex]:
    """Scattering amplitudes for a single unit input.

    For ``side="left"`` returns (a_out_l, a_out_r) / a_in_l; for
    ``side="right"`` returns (a_out_r, a_out_l) / a_in_r, i.e. always
    (same-side, opposite-side). At a CPA point both equal (+1/2, -1/2).
    """
    if params.kappa_l != params.kappa_r:
        raise PreconditionError("symmetric cavity required (kappa_l == kappa_r)")
    if side == "left":
        st = solve_steady_state(params, DriveConfig.left_only())
        return st.a_out_l, st.a_out_r
    if side == "right":
        st = solve_steady_state(params, DriveConfig.right_only())
        return st.a_out_r, st.a_out_l
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def detuning_map(params: SystemParams, delta, axis: str = "cavity"):
    """Detunings (Dc, Deg1, Deg2) along a scan at fixed emitter-cavity offsets.

    ``axis="cavity"``: the scan variable is the cavity detuning, Dc = Delta and
    each Deg_j = Delta + (Deg_j - Dc) from ``params``. ``axis="emitter"``: the
    scan variable is emitter 1's detuning, Deg1 = Delta and the cavity and
    emitter 2 follow at their fixed offsets.
    """
    delta = np.asarray(delta, dtype=float)
    off1 = params.delta_eg1 - params.delta_c
    off2 = params.delta_eg2 - params.delta_c
    if axis == "cavity":
        dc = delta
    elif axis == "emitter":
        dc = delta - off1
    else:
        raise ValueError(f"axis must be 'cavity' or 'emitter', got {axis!r}")
    return dc, dc + off1, dc + off2


def _equal_drive(drive: DriveConfig | None) -> DriveConfig:
    drive = DriveConfig.equal() if drive is None else drive
    if drive.a_in_l != drive.a_in_r or drive.amp_l == 0.0:
        raise PreconditionError("equal nonzero left and right drives required")
    return drive


def output_intensity(params: SystemParams, delta, drive: DriveConfig | None = None,
                     axis: str = "cavity"):
    """Normalized left output intensity along a detuning scan (vectorized)."""
    drive = _equal_drive(drive)
    dc, d1, d2 = detuning_map(params, delta, axis)
    fields = steady_state_grid(params, drive, delta_c=dc, delta_eg1=d1, delta_eg2=d2)
    return observables_from_fields(fields, drive)[0]


def golden_section(f, lo: float, hi: float, xtol: float) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on [lo, hi]; returns (x, f(x)) of the best point seen.

    Stops once the bracket is narrower than ``xtol`` (absolute).
    """
    a, b = min(lo, hi), max(lo, hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def find_absorption_minima(params: SystemParams, drive: DriveConfig | None = None,
                           delta_range: tuple[float, float] = (-40.0, 40.0),
                           n_grid: int = 4001, *, axis: str = "cavity",
                           xtol: float = 1e-10) -> list[AbsorptionMinimum]:
    """Local minima of the equal-drive output intensity along a detuning scan.

    A uniform pre-scan of ``n_grid`` points brackets every interior local
    minimum, which is then refined by golden-section search to ``xtol``. The
    emitter-cavity offsets of ``params`` stay fixed along the scan (see
    :func:`detuning_map` for the meaning of ``axis``). Minima closer than
    ``10 * xtol`` after refinement are reported once with ``merged=True``.
    """
    lo, hi = (float(v) for v in delta_range)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise ValueError(f"delta_range must be finite with lo < hi, got {delta_range}")
    if n_grid < 64:
        raise ValueError(f"n_grid must be >= 64, got {n_grid}")
    drive = _equal_drive(drive)

    x = np.linspace(lo, hi, n_grid)
    y = output_intensity(params, x, drive, axis)
    interior = np.flatnonzero((y[1:-1] < y[:-2]) & (y[1:-1] <= y[2:])) + 1

    def f(v):
        return float(output_intensity(params, v, drive, axis))

    found: list[AbsorptionMinimum] = []
    for i in interior:
        xm, ym = golden_section(f, x[i - 1], x[i + 1], xtol)
        if ym > y[i]:
            xm, ym = float(x[i]), float(y[i])
        if found and abs(xm - found[-1].delta) < 10 * xtol:
            prev = found.pop()
            best = prev if prev.depth <= ym else AbsorptionMinimum(xm, ym)
            found.append(AbsorptionMinimum(best.delta, best.depth, merged=True))
            continue
        found.append(AbsorptionMinimum(float(xm), float(ym)))
    return sorted(found, key=lambda m: m.delta)
