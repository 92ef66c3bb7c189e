"""Time-domain mean-field dynamics, used as an oracle for the algebraic steady state.

The state vector is complex, ordered (a, sigma1, sigma2, sz1, sz2). The
population inversions stay dynamical here, so the integration also shows
when the weak-excitation assumption (sz = -1) breaks down.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import RK45

from .errors import IntegrationError
from .model import DriveConfig, SystemParams, ensure_valid

WEAK_EXCITATION_LIMIT = 0.1
BOUND_TOL = 1e-6
TRACE_COLUMNS = ("t", "re_a", "im_a", "re_sigma1", "im_sigma1",
                 "re_sigma2", "im_sigma2", "sz1", "sz2")


@dataclass(frozen=True)
class MeanFieldState:
    a: complex = 0j
    sigma1: complex = 0j
    sigma2: complex = 0j
    sz1: float = -1.0
    sz2: float = -1.0
    t: float = 0.0

    @classmethod
    def ground(cls) -> "MeanFieldState":
        return cls()

    @classmethod
    def from_vector(cls, y, t: float = 0.0) -> "MeanFieldState":
        y = np.asarray(y)
        return cls(complex(y[0]), complex(y[1]), complex(y[2]),
                   float(y[3].real), float(y[4].real), float(t))

    def to_vector(self) -> np.ndarray:
        return np.array([self.a, self.sigma1, self.sigma2, self.sz1, self.sz2], dtype=complex)


@dataclass
class Trace:
    times: np.ndarray
    states: np.ndarray           # (len(times), 5) complex
    diagnostics: list[str] = field(default_factory=list)
    steps: int = 0

    @property
    def final(self) -> MeanFieldState:
        return MeanFieldState.from_vector(self.states[-1], self.times[-1])

    @property
    def max_inversion_shift(self) -> float:
        """Largest |sz_j + 1| along the trace."""
        return float(np.max(np.abs(self.states[:, 3:].real + 1.0)))

    def to_csv(self, path) -> None:
        write_trace_csv(self, path)


@dataclass(frozen=True)
class RelaxationReport:
    final: MeanFieldState
    converged: bool
    residual_norm: float
    steps: int
    max_inversion_shift: float = 0.0


def mean_field_rhs(t, y, params: SystemParams, drive: DriveConfig) -> np.ndarray:
    """Right-hand side on the raw complex vector (a, s1, s2, sz1, sz2)."""
    a, s1, s2, z1, z2 = y
    g1, g2, J = params.g1, params.g2, params.J
    da = (-(1j * params.delta_c + 0.5 * params.kappa_total) * a
          - 1j * (np.conj(g1) * s1 + np.conj(g2) * s2)
          - math.sqrt(params.kappa_l) * drive.a_in_l
          - math.sqrt(params.kappa_r) * drive.a_in_r)
    ds1 = -(1j * params.delta_eg1 + params.gamma1) * s1 + 1j * g1 * z1 * a + 1j * J * z1 * s2
    ds2 = -(1j * params.delta_eg2 + params.gamma2) * s2 + 1j * g2 * z2 * a + 1j * J * z2 * s1
    c1, c2, ca = np.conj(s1), np.conj(s2), np.conj(a)
    dz1 = (-2.0 * params.gamma1 * (z1 + 1.0)
           - 2j * (g1 * a * c1 - np.conj(g1) * s1 * ca)
           - 2j * J * (c1 * s2 - c2 * s1))
    dz2 = (-2.0 * params.gamma2 * (z2 + 1.0)
           - 2j * (g2 * a * c2 - np.conj(g2) * s2 * ca)
           - 2j * J * (c2 * s1 - c1 * s2))
    return np.array([da, ds1, ds2, dz1, dz2], dtype=complex)


def mean_field_derivatives(state: MeanFieldState, params: SystemParams,
                           drive: DriveConfig) -> np.ndarray:
    """Time derivative of ``state`` as a complex vector (a, s1, s2, sz1, sz2).

    Operator products are factorized into products of means and the emitter
    noise inputs are taken to have zero mean. The sz entries are real up to
    rounding.
    """
    ensure_valid(params)
    return mean_field_rhs(state.t, state.to_vector(), params, drive)


def _check_tolerances(rel_tol: float, abs_tol: float) -> None:
    for name, v in (("rel_tol", rel_tol), ("abs_tol", abs_tol)):
        if not 1e-13 <= v <= 1e-3:
            raise ValueError(f"{name} must lie in [1e-13, 1e-3], got {v}")


def _state_diagnostics(y) -> list[str]:
    out = []
    z = np.real(y[3:])
    if np.any(np.abs(z) > 1.0 + BOUND_TOL):
        out.append("inversion outside [-1, 1]")
    if np.any(np.abs(y[1:3]) > 1.0 + BOUND_TOL):
        out.append("emitter coherence above 1")
    return out


def _solver(params, drive, y0, t0, t_end, rel_tol, abs_tol):
    return RK45(lambda t, y: mean_field_rhs(t, y, params, drive), t0, y0, t_end,
                rtol=rel_tol, atol=abs_tol)


def integrate(params: SystemParams, drive: DriveConfig, t_end: float,
              rel_tol: float = 1e-9, abs_tol: float = 1e-12,
              initial: MeanFieldState | None = None,
              stride: float | None = None) -> Trace:
    """Adaptive Dormand-Prince 5(4) trajectory from ``initial`` (ground state by default).

    With ``stride`` the trace is sampled on the uniform grid t0, t0 + stride, ...
    (plus t_end) through the stepper's dense output; otherwise every accepted
    step is recorded.
    """
    ensure_valid(params)
    _check_tolerances(rel_tol, abs_tol)
    if not t_end > 0:
        raise ValueError(f"t_end must be > 0, got {t_end}")
    initial = MeanFieldState.ground() if initial is None else initial
    t0 = initial.t
    y0 = initial.to_vector()
    solver = _solver(params, drive, y0, t0, t0 + t_end, rel_tol, abs_tol)

    times, states = [t0], [y0]
    if stride is not None:
        if not stride > 0:
            raise ValueError(f"stride must be > 0, got {stride}")
        samples = t0 + stride * np.arange(1, int(math.floor(t_end / stride)) + 1)
        samples = samples[samples < t0 + t_end]
        next_sample = 0
    steps = 0
    notes: set[str] = set()
    while solver.status == "running":
        last_t, last_y = solver.t, solver.y.copy()
        solver.step()
        if solver.status == "failed":
            raise IntegrationError(f"integration failed at t={last_t:.6g}: {solver.message}",
                                   MeanFieldState.from_vector(last_y, last_t))
        steps += 1
        notes.update(_state_diagnostics(solver.y))
        if stride is None:
            times.append(solver.t)
            states.append(solver.y.copy())
        else:
            dense = solver.dense_output()
            while next_sample < len(samples) and samples[next_sample] <= solver.t:
                times.append(float(samples[next_sample]))
                states.append(dense(samples[next_sample]))
                next_sample += 1
    if stride is not None:
        times.append(solver.t)
        states.append(solver.y.copy())

    trace = Trace(np.array(times), np.array(states), sorted(notes), steps)
    if trace.max_inversion_shift > WEAK_EXCITATION_LIMIT:
        trace.diagnostics.append(
            f"weak-excitation violated: |sz + 1| reached {trace.max_inversion_shift:.3g}")
    return trace


def relax_to_steady(params: SystemParams, drive: DriveConfig, tol: float = 1e-10, *,
                    window: float = 5.0, t_max: float | None = None,
                    rel_tol: float = 1e-10, abs_tol: float = 1e-13) -> RelaxationReport:
    """Integrate from the ground state until the dynamics has come to rest.

    The scaled residual |dy/dt| / (|y| + 1) must stay below ``tol`` for a
    continuous ``window`` (in 1/gamma_ref). The run is abandoned at
    ``t_max`` (default 1000 / min(gamma_j, kappa)) and reported as not
    converged rather than raising.
    """
    ensure_valid(params)
    if not tol >= 1e-10:
        raise ValueError(f"tol must be >= 1e-10, got {tol}")
    _check_tolerances(rel_tol, abs_tol)
    if t_max is None:
        slowest = min(params.gamma1, params.gamma2, 0.5 * params.kappa_total)
        t_max = 1e3 / slowest

    def residual(t, y):
        return float(np.linalg.norm(mean_field_rhs(t, y, params, drive))
                     / (np.linalg.norm(y) + 1.0))

    y0 = MeanFieldState.ground().to_vector()
    solver = _solver(params, drive, y0, 0.0, t_max, rel_tol, abs_tol)
    calm_since = 0.0 if residual(0.0, y0) < tol else None
    steps = 0
    max_shift = 0.0
    r = residual(0.0, y0)
    converged = False
    while solver.status == "running":
        last_t, last_y = solver.t, solver.y.copy()
        solver.step()
        if solver.status == "failed":
            raise IntegrationError(f"integration failed at t={last_t:.6g}: {solver.message}",
                                   MeanFieldState.from_vector(last_y, last_t))
        steps += 1
        max_shift = max(max_shift, float(np.max(np.abs(solver.y[3:].real + 1.0))))
        r = residual(solver.t, solver.y)
        if r < tol:
            if calm_since is None:
                calm_since = solver.t
            if solver.t - calm_since >= window:
                converged = True
                break
        else:
            calm_since = None
    final = MeanFieldState.from_vector(solver.y, solver.t)
    return RelaxationReport(final, converged, r, steps, max_shift)


def write_trace_csv(trace: Trace, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for t, y in zip(trace.times, trace.states):
            w.writerow([f"{v:.17g}" for v in (
                t, y[0].real, y[0].imag, y[1].real, y[1].imag,
                y[2].real, y[2].imag, y[3].real, y[4].real)])
