"""Dressed-state (polariton) structure of the lossless two-emitter cavity.

Rotating the emitter pair into symmetric (bright) and antisymmetric (dark)
combinations leaves a single effective emitter at Deg + J coupled with
strength sqrt(2) g, plus a dark emitter at Deg - J that never talks to the
cavity. Within the manifold of n excitations the bright pair
{|e, n-1>, |g, n>} gives the polariton doublet computed in closed form here.
:func:`numeric_ladder` diagonalizes the untransformed Hamiltonian directly and
serves as the independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateAngleError, InternalError, PreconditionError
from .model import SystemParams

MAX_LADDER = 12
EMITTER_ORDER = ("gg", "eg", "ge", "ee")


@dataclass(frozen=True)
class TransformedModel:
    bright_detuning: float
    dark_detuning: float
    bright_coupling: float
    dark_decoupled: bool = True


@dataclass(frozen=True)
class PolaritonLevel:
    n: int
    lambda_plus: float
    lambda_minus: float
    phi_n: float
    omega_n: float
    weights: tuple[float, float]  # (cos(phi/2), sin(phi/2)) on |e,n-1>, |g,n>


@dataclass(frozen=True)
class LadderManifold:
    n: int
    energies: np.ndarray   # ascending
    vectors: np.ndarray    # columns are eigenvectors in ``basis`` order
    basis: tuple[str, ...]


def _require_identical(params: SystemParams) -> None:
    if params.delta_eg1 != params.delta_eg2:
        raise PreconditionError(
            f"delta_eg2 differs from delta_eg1 ({params.delta_eg2} != {params.delta_eg1})")
    if params.g1 != params.g2:
        raise PreconditionError(f"g2 differs from g1 ({params.g2} != {params.g1})")


def transform_model(params: SystemParams) -> TransformedModel:
    """Bright/dark effective parameters for identical emitters."""
    _require_identical(params)
    return TransformedModel(
        bright_detuning=params.delta_eg1 + params.J,
        dark_detuning=params.delta_eg1 - params.J,
        bright_coupling=math.sqrt(2.0) * abs(params.g1),
    )


def dressed_detuning(params: SystemParams) -> float:
    """Bright-emitter/cavity detuning Deg - Dc + J."""
    _require_identical(params)
    return params.delta_eg1 - params.delta_c + params.J


def rabi_splitting(n: int, params: SystemParams) -> float:
    """Generalized Rabi frequency sqrt(d^2 + 8 g^2 n), d = Deg - Dc + J."""
    if n < 1:
        raise ValueError(f"manifold index must be >= 1, got {n}")
    d = dressed_detuning(params)
    return math.sqrt(d * d + 8.0 * abs(params.g1) ** 2 * n)


def mixing_angle(n: int, params: SystemParams) -> float:
    """Mixing angle in (0, pi): tan(phi) = 2 g sqrt(2n) / d, phi = pi/2 on resonance."""
    g = abs(params.g1)
    d = dressed_detuning(params)
    if g == 0.0 and d == 0.0:
        raise DegenerateAngleError("mixing angle undefined for g = 0 on exact resonance")
    return math.atan2(2.0 * g * math.sqrt(2.0 * n), d)


def polariton_eigensystem(n: int, params: SystemParams) -> PolaritonLevel:
    """Upper/lower polariton of manifold n (lossless, hbar = 1).

    lambda_pm = n Dc + d/2 +- Omega_n/2 with |lambda_+> = cos(phi/2)|e,n-1> +
    sin(phi/2)|g,n> and |lambda_-> = sin(phi/2)|e,n-1> - cos(phi/2)|g,n>.
    """
    if n < 1:
        raise ValueError(f"manifold index must be >= 1, got {n}")
    phi = mixing_angle(n, params)
    omega = rabi_splitting(n, params)
    centre = n * params.delta_c + 0.5 * dressed_detuning(params)
    return PolaritonLevel(
        n=n,
        lambda_plus=centre + 0.5 * omega,
        lambda_minus=centre - 0.5 * omega,
        phi_n=phi,
        omega_n=omega,
        weights=(math.cos(phi / 2), math.sin(phi / 2)),
    )


def transition_weights(params: SystemParams) -> tuple[float, float]:
    """(cos(phi/2), sin(phi/2)) of the lowest manifold.

    sqrt(kappa) * sin(phi/2) weighs the upper-polariton decay to |g,0> and
    -sqrt(kappa) * cos(phi/2) the lower one; kappa is left to the caller.
    """
    return polariton_eigensystem(1, params).weights


def _operators(n_photons: int):
    """Annihilators a, s1, s2 on Fock(0..n_photons) x qubit x qubit, qubit basis (g, e)."""
    a = np.diag(np.sqrt(np.arange(1, n_photons + 1, dtype=float)), 1)
    s = np.array([[0.0, 1.0], [0.0, 0.0]])
    i_f, i_q = np.eye(n_photons + 1), np.eye(2)
    return (np.kron(np.kron(a, i_q), i_q),
            np.kron(np.kron(i_f, s), i_q),
            np.kron(np.kron(i_f, i_q), s))


def system_hamiltonian(params: SystemParams, n_photons: int) -> np.ndarray:
    """Lossless rotating-frame Hamiltonian on a truncated photon space."""
    a, s1, s2 = _operators(n_photons)
    ad, s1d, s2d = a.conj().T, s1.conj().T, s2.conj().T
    h = (params.delta_c * ad @ a
         + params.delta_eg1 * s1d @ s1 + params.delta_eg2 * s2d @ s2
         + params.g1 * a @ s1d + np.conj(params.g1) * s1 @ ad
         + params.g2 * a @ s2d + np.conj(params.g2) * s2 @ ad
         + params.J * (s1d @ s2 + s2d @ s1))
    return h


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            first = col[nz[0]]
            out[:, k] = col * (abs(first) / first)
    return out


def numeric_ladder(params: SystemParams, n_max: int, *,
                   double_excitation: bool = False) -> list[LadderManifold]:
    """Exact diagonalization of each excitation manifold n = 1..n_max.

    The basis of manifold n is {|gg,n>, |eg,n-1>, |ge,n-1>} and, with
    ``double_excitation=True``, also |ee,n-2>. Without the doubly excited
    state the block is the one-emitter-excitation sector in which the
    bright/dark reduction is exact for every n; with it the n >= 2 blocks
    hold the full two-emitter spectrum and their coupled eigenvalues move
    away from the closed-form doublet. Losses are excluded.
    """
    if not 1 <= n_max <= MAX_LADDER:
        raise ValueError(f"n_max must lie in [1, {MAX_LADDER}], got {n_max}")
    h = system_hamiltonian(params, n_max)
    if np.max(np.abs(h - h.conj().T)) > 1e-15 * max(1.0, np.max(np.abs(h))):
        raise InternalError("assembled Hamiltonian is not Hermitian")

    labels = []
    for photons in range(n_max + 1):
        for q1 in "ge":
            for q2 in "ge":
                labels.append((q1 + q2, photons))
    excitations = np.array([p + (q[0] == "e") + (q[1] == "e") for q, p in labels])

    ladder = []
    for n in range(1, n_max + 1):
        idx = sorted((i for i, (q, _) in enumerate(labels)
                      if excitations[i] == n and (double_excitation or q != "ee")),
                     key=lambda i: EMITTER_ORDER.index(labels[i][0]))
        block = h[np.ix_(idx, idx)]
        energies, vectors = np.linalg.eigh(block)
        ladder.append(LadderManifold(
            n=n,
            energies=energies,
            vectors=_fix_signs(vectors),
            basis=tuple(f"|{labels[i][0]},{labels[i][1]}>" for i in idx),
        ))
    return ladder
