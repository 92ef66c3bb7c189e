"""Weak-excitation steady state of the driven cavity and its output fields.

With both emitters pinned near the ground state (<sigma_z> = -1) and no
direct emitter drive, the stationary mean-field equations reduce to the
3x3 complex linear system

    (i Dc + (kl + kr)/2) a + i g1* s1 + i g2* s2 = -sqrt(kl) ain_l - sqrt(kr) ain_r
    (i Dj + gj) sj + i J sk                      = -i gj a

and the outputs follow from a_out = a_in + sqrt(kappa) a on each mirror.
The linear solve is the primary path; the closed forms below exist as
independent cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import PreconditionError, SingularSystemError
from .model import DriveConfig, SystemParams, ensure_valid

CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class SteadyState:
    a: complex
    sigma1: complex
    sigma2: complex
    a_out_l: complex
    a_out_r: complex

    def scaled_difference(self, other: "SteadyState") -> float:
        """Max relative deviation of (a, sigma1, sigma2) from ``other``."""
        mine = np.array([self.a, self.sigma1, self.sigma2])
        ref = np.array([other.a, other.sigma1, other.sigma2])
        return float(np.linalg.norm(mine - ref) / max(np.linalg.norm(ref), 1e-300))


@dataclass(frozen=True)
class Observables:
    """Intensities normalized to the reference input |a_in|^2."""

    out_l: float
    out_r: float
    cavity: float
    atoms: float


class FieldArrays(NamedTuple):
    a: np.ndarray
    sigma1: np.ndarray
    sigma2: np.ndarray
    a_out_l: np.ndarray
    a_out_r: np.ndarray


def _system_matrices(params: SystemParams, delta_c, delta_eg1, delta_eg2, J):
    delta_c, delta_eg1, delta_eg2, J = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (delta_c, delta_eg1, delta_eg2, J)))
    shape = delta_c.shape
    m = np.zeros(shape + (3, 3), dtype=complex)
    m[..., 0, 0] = 1j * delta_c + 0.5 * params.kappa_total
    m[..., 0, 1] = 1j * np.conj(params.g1)
    m[..., 0, 2] = 1j * np.conj(params.g2)
    m[..., 1, 0] = 1j * params.g1
    m[..., 1, 1] = 1j * delta_eg1 + params.gamma1
    m[..., 1, 2] = 1j * J
    m[..., 2, 0] = 1j * params.g2
    m[..., 2, 1] = 1j * J
    m[..., 2, 2] = 1j * delta_eg2 + params.gamma2
    return m


def steady_state_grid(params: SystemParams, drive: DriveConfig, *,
                      delta_c=None, delta_eg1=None, delta_eg2=None, J=None) -> FieldArrays:
    """Solve the steady state for arrays of detunings and/or DDI strengths.

    Any keyword left as None takes its value from ``params``; the given arrays
    are broadcast against each other. Raises SingularSystemError if any grid
    point has condition number above ``CONDITION_LIMIT``.
    """
    ensure_valid(params)
    if drive.amp_l == 0.0 and drive.amp_r == 0.0:
        raise PreconditionError("at least one drive amplitude must be > 0")
    m = _system_matrices(
        params,
        params.delta_c if delta_c is None else delta_c,
        params.delta_eg1 if delta_eg1 is None else delta_eg1,
        params.delta_eg2 if delta_eg2 is None else delta_eg2,
        params.J if J is None else J,
    )
    cond = np.linalg.cond(m)
    bad = ~(cond <= CONDITION_LIMIT)
    if np.any(bad):
        idx = np.unravel_index(int(np.argmax(bad)), bad.shape) if bad.ndim else ()
        det = np.linalg.det(m[idx])
        raise SingularSystemError(
            f"resonant singular parameters: condition number {cond[idx]:.3e} "
            f"exceeds {CONDITION_LIMIT:.0e} (determinant {det:.3e})")
    ain_l, ain_r = drive.a_in_l, drive.a_in_r
    rhs = np.zeros(m.shape[:-1], dtype=complex)
    rhs[..., 0] = -math.sqrt(params.kappa_l) * ain_l - math.sqrt(params.kappa_r) * ain_r
    x = np.linalg.solve(m, rhs[..., None])[..., 0]
    a = x[..., 0]
    out_l, out_r = output_fields(a, params, drive)
    return FieldArrays(a, x[..., 1], x[..., 2], out_l, out_r)


def solve_steady_state(params: SystemParams, drive: DriveConfig) -> SteadyState:
    """Stationary (a, sigma1, sigma2) and output amplitudes for one parameter point."""
    f = steady_state_grid(params, drive)
    return SteadyState(*(complex(v) for v in f))


def output_fields(a, params: SystemParams, drive: DriveConfig):
    """Input-output boundary conditions on both mirrors."""
    return (drive.a_in_l + math.sqrt(params.kappa_l) * a,
            drive.a_in_r + math.sqrt(params.kappa_r) * a)


def self_energy(params: SystemParams, delta_eg1=None, delta_eg2=None, J=None):
    """Emitter-induced shift of the cavity pole, including the DDI dressing."""
    d1 = params.delta_eg1 if delta_eg1 is None else delta_eg1
    d2 = params.delta_eg2 if delta_eg2 is None else delta_eg2
    J = params.J if J is None else J
    g1, g2 = params.g1, params.g2
    A1 = 1j * np.asarray(d1) + params.gamma1
    A2 = 1j * np.asarray(d2) + params.gamma2
    det = A1 * A2 + np.asarray(J) ** 2
    num = (abs(g1) ** 2 * A2 + abs(g2) ** 2 * A1
           - 1j * np.asarray(J) * (np.conj(g1) * g2 + g1 * np.conj(g2)))
    return num / det


def closed_form_intracavity(params: SystemParams, drive: DriveConfig) -> complex:
    """Intracavity amplitude from the eliminated-emitter closed form.

    a = -(sqrt(kl) ain_l + sqrt(kr) ain_r) / (i Dc + (kl + kr)/2 + Sigma),
    with Sigma from :func:`self_energy`. The inner denominator
    (i D1 + g1)(i D2 + g2) + J^2 has a strictly positive real part whenever
    both emitter decay rates are positive, so this is total on valid input.
    """
    ensure_valid(params)
    num = -(math.sqrt(params.kappa_l) * drive.a_in_l + math.sqrt(params.kappa_r) * drive.a_in_r)
    den = 1j * params.delta_c + 0.5 * params.kappa_total + self_energy(params)
    return complex(num / den)


def _require_symmetric_equal_drive(params: SystemParams, drive: DriveConfig) -> None:
    if params.kappa_l != params.kappa_r:
        raise PreconditionError("symmetric cavity required (kappa_l == kappa_r)")
    if drive.a_in_l != drive.a_in_r:
        raise PreconditionError("equal left and right drives required")


def single_qe_output(params: SystemParams, drive: DriveConfig) -> complex:
    """Output amplitude (either side) for emitter 1 alone, equal drives.

    a_out = a_in - 2 kappa a_in / (i Dc + kappa + |g1|^2 / (i D1 + gamma1)).
    Emitter 2 and the DDI are ignored.
    """
    ensure_valid(params)
    _require_symmetric_equal_drive(params, drive)
    kappa = params.kappa_l
    ain = drive.a_in_l
    den = (1j * params.delta_c + kappa
           + abs(params.g1) ** 2 / (1j * params.delta_eg1 + params.gamma1))
    return ain - 2.0 * kappa * ain / den


def two_qe_output(params: SystemParams, drive: DriveConfig) -> complex:
    """Output amplitude for two identical emitters resonant with the cavity.

    Requires delta_eg1 = delta_eg2 = delta_c = Delta, equal couplings and decay
    rates, a symmetric cavity and equal drives.
    """
    ensure_valid(params)
    _require_symmetric_equal_drive(params, drive)
    if not params.identical_emitters:
        raise PreconditionError("identical emitters required")
    if params.delta_eg1 != params.delta_c:
        raise PreconditionError("emitters must be resonant with the cavity (delta_eg == delta_c)")
    kappa, gamma, J = params.kappa_l, params.gamma1, params.J
    delta = params.delta_c
    g2 = abs(params.g1) ** 2
    A = 1j * delta + gamma
    inner = A * A + J * J
    if inner == 0:
        raise SingularSystemError("inner denominator (i Delta + gamma)^2 + J^2 vanishes")
    ain = drive.a_in_l
    return ain - 2.0 * kappa * ain / (1j * delta + kappa + (2 * g2 * A - 2j * g2 * J) / inner)


def observables_from_fields(fields: FieldArrays | SteadyState, drive: DriveConfig):
    """Normalized intensities; returns arrays for FieldArrays, floats for SteadyState."""
    ref = drive.reference_intensity
    vals = (np.abs(fields.a_out_l) ** 2 / ref,
            np.abs(fields.a_out_r) ** 2 / ref,
            np.abs(fields.a) ** 2 / ref,
            np.abs(np.asarray(fields.sigma1) + np.asarray(fields.sigma2)) ** 2 / ref)
    if isinstance(fields, SteadyState):
        return Observables(*(float(v) for v in vals))
    return vals


def observables(params: SystemParams, drive: DriveConfig) -> Observables:
    """Normalized output, intracavity and collective-emitter intensities."""
    drive.reference_intensity  # raises on an all-zero drive
    return observables_from_fields(solve_steady_state(params, drive), drive)
