"""Parameter model of two dipole-coupled emitters in a two-sided cavity.

All rates and detunings in :class:`SystemParams` are dimensionless, measured
in units of a common reference decay rate ``gamma_ref`` (hbar = 1, energies
are angular frequencies). Only :class:`GeometryInput` carries physical units;
:func:`ddi_from_geometry` converts it to a dipole-dipole strength that must
then be divided by ``gamma_ref`` by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

from .errors import DomainError, PreconditionError, ValidationError

SPEED_OF_LIGHT = 299_792_458.0  # m/s

# Angle at which the dipolar factor 1 - 3cos^2(phi) vanishes.
MAGIC_ANGLE = math.acos(1.0 / math.sqrt(3.0))


@dataclass(frozen=True)
class SystemParams:
    """Rates and detunings of the two-emitter cavity model (units of gamma_ref).

    Defaults are the strong-coupling baseline used throughout: g = 10,
    kappa_l = kappa_r = gamma = 1, no DDI, everything on resonance with the
    laser. Construction never rejects values; use :func:`validate` to obtain
    diagnostics, or :func:`ensure_valid` to raise.
    """

    gamma1: float = 1.0
    gamma2: float = 1.0
    kappa_l: float = 1.0
    kappa_r: float = 1.0
    g1: complex = 10.0
    g2: complex = 10.0
    J: float = 0.0
    delta_c: float = 0.0
    delta_eg1: float = 0.0
    delta_eg2: float = 0.0

    def __post_init__(self) -> None:
        for name in ("gamma1", "gamma2", "kappa_l", "kappa_r", "J",
                     "delta_c", "delta_eg1", "delta_eg2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        for name in ("g1", "g2"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @classmethod
    def identical(cls, g=10.0, gamma=1.0, kappa=1.0, J=0.0,
                  delta_c=0.0, delta_eg=None) -> "SystemParams":
        """Identical emitters in a symmetric cavity.

        ``delta_eg`` defaults to ``delta_c`` (emitters resonant with the cavity).
        """
        if delta_eg is None:
            delta_eg = delta_c
        return cls(gamma1=gamma, gamma2=gamma, kappa_l=kappa, kappa_r=kappa,
                   g1=g, g2=g, J=J, delta_c=delta_c,
                   delta_eg1=delta_eg, delta_eg2=delta_eg)

    @classmethod
    def single_emitter(cls, g=10.0, gamma=1.0, kappa=1.0,
                       delta_c=0.0, delta_eg=None) -> "SystemParams":
        """One emitter in a symmetric cavity (emitter 2 uncoupled, no DDI)."""
        if delta_eg is None:
            delta_eg = delta_c
        return cls(gamma1=gamma, gamma2=gamma, kappa_l=kappa, kappa_r=kappa,
                   g1=g, g2=0.0, J=0.0, delta_c=delta_c,
                   delta_eg1=delta_eg, delta_eg2=delta_eg)

    def replace(self, **changes) -> "SystemParams":
        return replace(self, **changes)

    @property
    def kappa_total(self) -> float:
        return self.kappa_l + self.kappa_r

    @property
    def symmetric_cavity(self) -> bool:
        return self.kappa_l == self.kappa_r

    @property
    def identical_emitters(self) -> bool:
        return (self.gamma1 == self.gamma2 and self.g1 == self.g2
                and self.delta_eg1 == self.delta_eg2)

    @property
    def delta_ac(self) -> float:
        """Emitter-cavity detuning Delta_eg - Delta_c (identical emitters only)."""
        if self.delta_eg1 != self.delta_eg2:
            raise PreconditionError(
                "delta_ac is defined only for identical emitter detunings "
                f"(delta_eg1={self.delta_eg1}, delta_eg2={self.delta_eg2})")
        return self.delta_eg1 - self.delta_c

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class DriveConfig:
    """Coherent inputs on the left and right mirrors.

    Phases are reduced to (-pi, pi] on construction; amplitudes are in units
    of sqrt(gamma_ref).
    """

    amp_l: float = 1.0
    amp_r: float = 1.0
    phase_l: float = 0.0
    phase_r: float = 0.0

    def __post_init__(self) -> None:
        amp_l, amp_r = float(self.amp_l), float(self.amp_r)
        if not (amp_l >= 0.0 and amp_r >= 0.0):
            raise ValueError(f"drive amplitudes must be >= 0, got {amp_l}, {amp_r}")
        if not all(map(math.isfinite, (amp_l, amp_r, self.phase_l, self.phase_r))):
            raise ValueError("drive amplitudes and phases must be finite")
        object.__setattr__(self, "amp_l", amp_l)
        object.__setattr__(self, "amp_r", amp_r)
        object.__setattr__(self, "phase_l", wrap_phase(self.phase_l))
        object.__setattr__(self, "phase_r", wrap_phase(self.phase_r))

    @classmethod
    def equal(cls, amp=1.0, relative_phase=0.0) -> "DriveConfig":
        """Equal magnitudes with phase_l - phase_r = relative_phase."""
        return cls(amp, amp, relative_phase, 0.0)

    @classmethod
    def left_only(cls, amp=1.0, phase=0.0) -> "DriveConfig":
        return cls(amp, 0.0, phase, 0.0)

    @classmethod
    def right_only(cls, amp=1.0, phase=0.0) -> "DriveConfig":
        return cls(0.0, amp, 0.0, phase)

    @property
    def a_in_l(self) -> complex:
        return self.amp_l * complex(math.cos(self.phase_l), math.sin(self.phase_l))

    @property
    def a_in_r(self) -> complex:
        return self.amp_r * complex(math.cos(self.phase_r), math.sin(self.phase_r))

    @property
    def relative_phase(self) -> float:
        return wrap_phase(self.phase_l - self.phase_r)

    @property
    def reference_intensity(self) -> float:
        """|a_in|^2 used to normalize observables: left input if nonzero, else right."""
        if self.amp_l > 0.0:
            return self.amp_l ** 2
        if self.amp_r > 0.0:
            return self.amp_r ** 2
        raise PreconditionError("undefined normalization: both drive amplitudes are zero")

    def scaled(self, factor: complex) -> "DriveConfig":
        """Drive multiplied by a complex factor."""
        mag, arg = abs(factor), math.atan2(complex(factor).imag, complex(factor).real)
        return DriveConfig(self.amp_l * mag, self.amp_r * mag,
                           self.phase_l + arg, self.phase_r + arg)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class GeometryInput:
    """Physical inputs of the dipole-dipole formula (SI or any consistent units)."""

    gamma0: float
    omega_eg: float
    r12: float
    phi: float = math.pi / 2
    c: float = SPEED_OF_LIGHT

    def __post_init__(self) -> None:
        if not self.r12 > 0.0:
            raise DomainError(f"r12 must be > 0 (dipolar coupling diverges), got {self.r12}")
        if not self.gamma0 > 0.0:
            raise DomainError(f"gamma0 must be > 0, got {self.gamma0}")
        if not self.omega_eg > 0.0:
            raise DomainError(f"omega_eg must be > 0, got {self.omega_eg}")
        if not self.c > 0.0:
            raise DomainError(f"c must be > 0, got {self.c}")
        if not 0.0 <= self.phi <= math.pi:
            raise DomainError(f"phi must lie in [0, pi], got {self.phi}")


@dataclass(frozen=True)
class Diagnostic:
    field: str
    code: str
    message: str


def wrap_phase(theta: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    theta = float(theta)
    if -math.pi < theta <= math.pi:
        return theta  # leave in-range angles bit-identical
    # remainder() is exact, so the only error is that of the float 2 pi
    r = math.remainder(theta, 2 * math.pi)
    return math.pi if r <= -math.pi else r


def ddi_from_geometry(geom: GeometryInput) -> float:
    """Dipole-dipole strength J = 3 Gamma0 c^3 / (4 omega^3 r^3) * (1 - 3 cos^2 phi).

    Returned in the angular-frequency units of ``gamma0``.
    """
    prefactor = 3.0 * geom.gamma0 * geom.c ** 3 / (4.0 * geom.omega_eg ** 3 * geom.r12 ** 3)
    return prefactor * (1.0 - 3.0 * math.cos(geom.phi) ** 2)


def separation_from_ddi(J: float, gamma0: float, omega_eg: float,
                        c: float = SPEED_OF_LIGHT) -> float:
    """Inverse of :func:`ddi_from_geometry` for dipoles perpendicular to the axis."""
    if not J > 0.0:
        raise DomainError(f"no real separation for J = {J} with perpendicular dipoles")
    if not (gamma0 > 0.0 and omega_eg > 0.0 and c > 0.0):
        raise DomainError("gamma0, omega_eg and c must be > 0")
    return (3.0 * gamma0 * c ** 3 / (4.0 * omega_eg ** 3 * J)) ** (1.0 / 3.0)


def require_symmetric(params: SystemParams, *, real_coupling: bool = True) -> None:
    """Raise PreconditionError naming the first field that breaks the symmetric case."""
    if params.gamma1 != params.gamma2:
        raise PreconditionError(
            f"gamma2 differs from gamma1 ({params.gamma2} != {params.gamma1})")
    if params.g1 != params.g2:
        raise PreconditionError(f"g2 differs from g1 ({params.g2} != {params.g1})")
    if real_coupling and params.g1.imag != 0.0:
        raise PreconditionError(f"g1 must be real, got {params.g1}")
    if params.delta_eg1 != params.delta_eg2:
        raise PreconditionError(
            f"delta_eg2 differs from delta_eg1 ({params.delta_eg2} != {params.delta_eg1})")
    if params.kappa_l != params.kappa_r:
        raise PreconditionError(
            f"kappa_r differs from kappa_l ({params.kappa_r} != {params.kappa_l})")


def cooperativity(params: SystemParams) -> float:
    """C = g^2 / (2 kappa gamma) for identical emitters in a symmetric cavity."""
    require_symmetric(params)
    g = params.g1.real
    return g * g / (2.0 * params.kappa_l * params.gamma1)


def validate(params: SystemParams) -> list[Diagnostic]:
    """Check the model invariants. An empty list means the parameters are valid."""
    out: list[Diagnostic] = []
    for name, value in params.as_dict().items():
        parts = (value.real, value.imag) if isinstance(value, complex) else (value,)
        if not all(math.isfinite(v) for v in parts):
            out.append(Diagnostic(name, "non-finite", "non-finite value"))
    for name in ("gamma1", "gamma2"):
        value = getattr(params, name)
        if value < 0.0:
            out.append(Diagnostic(name, "negative-rate", "negative decay rate"))
        elif value == 0.0:
            out.append(Diagnostic(name, "zero-rate", "emitter decay rate must be > 0"))
    for name in ("kappa_l", "kappa_r"):
        if getattr(params, name) < 0.0:
            out.append(Diagnostic(name, "negative-rate", "negative decay rate"))
    if params.kappa_l == 0.0 and params.kappa_r == 0.0:
        out.append(Diagnostic("kappa_l+kappa_r", "no-output", "no output channel"))
    return out


def ensure_valid(params: SystemParams) -> None:
    diagnostics = validate(params)
    if diagnostics:
        raise ValidationError(diagnostics)
