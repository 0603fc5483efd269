"""Paired Schroedinger evolution, evolved C-operators and the phase integral.

Right states evolve under H(t), left states under H(t)^dag:

    i*hbar d|psi>/dt = H(t) |psi>,      i*hbar d|phi>/dt = H(t)^dag |phi>.

The pairing conserves <phi|psi> exactly, which is what keeps an evolved
C-operator involutory.  A classical fixed-step RK4 integrates both equations
simultaneously; it is deliberately a different code path from the matrix
exponentials used elsewhere, so the two can cross-validate each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .coperator import COperator, Signature, validate_signature
from .errors import BranchFlipError, DriveRangeError, OffGridError
from .model import HamiltonianParams, hamiltonian_at


@dataclass(frozen=True, eq=False)
class EvolvedState:
    """One right/left pair sampled on a uniform time grid."""

    grid: np.ndarray
    right_states: np.ndarray
    left_states: np.ndarray

    def index_of(self, t: float) -> int:
        k = int(np.argmin(np.abs(self.grid - t)))
        if abs(self.grid[k] - t) > 1e-9 * max(1.0, abs(t)):
            raise OffGridError(f"t={t} is not a grid node")
        return k


def tdse_integrate(
    p: HamiltonianParams,
    psi0: np.ndarray,
    phi0: np.ndarray,
    t0: float,
    t1: float,
    steps: int,
) -> EvolvedState:
    """RK4 integration of the paired equations; global error O(dt^4)."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not p.drive.covers(min(t0, t1), max(t0, t1)):
        raise DriveRangeError(f"drive does not cover [{t0}, {t1}]")
    dt = (t1 - t0) / steps
    grid = t0 + dt * np.arange(steps + 1)
    rights = np.empty((steps + 1, 2), dtype=complex)
    lefts = np.empty((steps + 1, 2), dtype=complex)
    rights[0] = np.asarray(psi0, dtype=complex)
    lefts[0] = np.asarray(phi0, dtype=complex)
    coeff = -1j / p.hbar
    for k in range(steps):
        t = grid[k]
        ha = hamiltonian_at(p, t)
        hm = hamiltonian_at(p, t + 0.5 * dt)
        hb = hamiltonian_at(p, t + dt)
        for states, hs in ((rights, (ha, hm, hb)), (lefts, (ha.conj().T, hm.conj().T, hb.conj().T))):
            v = states[k]
            k1 = coeff * (hs[0] @ v)
            k2 = coeff * (hs[1] @ (v + 0.5 * dt * k1))
            k3 = coeff * (hs[1] @ (v + 0.5 * dt * k2))
            k4 = coeff * (hs[2] @ (v + dt * k3))
            states[k + 1] = v + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return EvolvedState(grid=grid, right_states=rights, left_states=lefts)


def c_from_evolution(
    plus: EvolvedState,
    minus: EvolvedState,
    signature: Signature,
    t: float,
) -> COperator:
    """Signature-weighted sum of evolved |right><left| pairs at a grid time.

    The initial pairs must be biorthonormalized at the starting time; the
    evolution preserves the pairing, so no renormalization is applied here
    (any drift is diagnostic and shows up in the involution residual).
    """
    signature = validate_signature(signature)
    i = plus.index_of(t)
    j = minus.index_of(t)
    acc = signature[0] * np.outer(plus.right_states[i], np.conj(plus.left_states[i]))
    acc += signature[1] * np.outer(minus.right_states[j], np.conj(minus.left_states[j]))
    return COperator(matrix=acc, signature=signature, time=t)


class PhaseConvention(Enum):
    #: reconstruction factor exp(i*alpha)
    EXP_I_ALPHA = "exp-i-alpha"
    #: reconstruction factor exp(i*hbar*alpha)
    EXP_I_HBAR_ALPHA = "exp-i-hbar-alpha"


@dataclass(frozen=True, eq=False)
class PhaseTrace:
    grid: np.ndarray
    alpha: np.ndarray
    convention: PhaseConvention
    #: largest |Im(alpha_dot)| encountered; the integrated alpha is real
    imag_residue: float


def phase_factor(trace: PhaseTrace, hbar: float = 1.0) -> np.ndarray:
    """Reconstruction factors e^{i alpha} or e^{i hbar alpha} on the grid."""
    if trace.convention is PhaseConvention.EXP_I_HBAR_ALPHA:
        return np.exp(1j * hbar * trace.alpha)
    return np.exp(1j * trace.alpha)


def aligned_eigenstate_trace(
    state_at: Callable[[float], np.ndarray],
    rho_at: Callable[[float], np.ndarray],
    grid: np.ndarray,
) -> np.ndarray:
    """Sample an eigenstate provider into a smooth, metric-normalized trace.

    Each sample is scaled to unit metric norm <v|rho v> = 1 and its phase is
    rotated so the overlap with the previous sample is positive real.  A
    relative overlap modulus below 0.5 means the provider jumped branches.
    """
    out = np.empty((len(grid), 2), dtype=complex)
    for k, t in enumerate(grid):
        v = np.asarray(state_at(t), dtype=complex)
        rho = rho_at(t)
        norm_sq = np.real(np.vdot(v, rho @ v))
        if norm_sq <= 0:
            raise ValueError("state has non-positive metric norm")
        v = v / np.sqrt(norm_sq)
        if k > 0:
            prev = out[k - 1]
            ov = np.vdot(prev, v)
            rel = abs(ov) / (np.linalg.norm(prev) * np.linalg.norm(v))
            if rel < 0.5:
                raise BranchFlipError(f"overlap modulus {rel:.3f} below 0.5 at t={t}")
            v = v * (np.conj(ov) / abs(ov))
        out[k] = v
    return out


def phase_alpha(
    state_at: Callable[[float], np.ndarray],
    p: HamiltonianParams,
    rho_at: Callable[[float], np.ndarray],
    t0: float,
    t1: float,
    steps: int,
    convention: PhaseConvention = PhaseConvention.EXP_I_ALPHA,
) -> PhaseTrace:
    """Accumulated phase relating an invariant eigenstate to the dynamics.

    alpha_dot(t) = <v| rho (i d/dt - H/hbar) |v> / <v| rho |v> is evaluated
    on the aligned trace with second-order finite differences and integrated
    by the trapezoid rule, with alpha(t0) = 0.  The imaginary part of
    alpha_dot must stay negligible (it is reported); alpha itself is real.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    grid = np.linspace(t0, t1, steps + 1)
    states = aligned_eigenstate_trace(state_at, rho_at, grid)
    dt = grid[1] - grid[0]

    dstates = np.empty_like(states)
    dstates[1:-1] = (states[2:] - states[:-2]) / (2.0 * dt)
    dstates[0] = (-3.0 * states[0] + 4.0 * states[1] - states[2]) / (2.0 * dt)
    dstates[-1] = (3.0 * states[-1] - 4.0 * states[-2] + states[-3]) / (2.0 * dt)

    alpha_dot = np.empty(len(grid), dtype=complex)
    for k, t in enumerate(grid):
        v = states[k]
        rho = rho_at(t)
        h = hamiltonian_at(p, t)
        num = np.vdot(v, rho @ (1j * dstates[k] - (h @ v) / p.hbar))
        den = np.vdot(v, rho @ v)
        alpha_dot[k] = num / den
    imag_residue = float(np.max(np.abs(alpha_dot.imag)))
    if imag_residue > 1e-3 * max(1.0, float(np.max(np.abs(alpha_dot.real)))):
        raise ArithmeticError(f"alpha_dot has non-negligible imaginary part {imag_residue:.3g}")

    real = alpha_dot.real
    alpha = np.concatenate([[0.0], np.cumsum(0.5 * dt * (real[1:] + real[:-1]))])
    return PhaseTrace(grid=grid, alpha=alpha, convention=convention, imag_residue=imag_residue)
