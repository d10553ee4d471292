"""Pulse and gate algebra on ``JointState``.

Ramsey zones act on the atom only, identically in every photon sector.  With
``(a, b)`` the addressed pair and ``phi`` the zone phase::

    |a> -> (|a> + e^{i phi} |b>) / sqrt(2)
    |b> -> (-e^{-i phi} |a> + |b>) / sqrt(2)

This sign placement is a convention; everything downstream (probe
calibration, CNOT sandwich, fringe oracles) is derived from it rather than
assuming it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import constants

from .dynamics import CavityParams, evolve_resonant
from .errors import SubspaceError
from .hilbert import LEVELS, AtomLevel, JointState

GATE_SUBSPACE_TOL = 1e-10


class Transition(str, Enum):
    CAVITY_EG = "cavity_eg"
    RAMSEY_EG = "ramsey_eg"
    RAMSEY_GI = "ramsey_gi"


_RAMSEY_PAIRS = {
    "eg": (AtomLevel.E, AtomLevel.G),
    "gi": (AtomLevel.G, AtomLevel.I),
}


@dataclass(frozen=True)
class PulseSpec:
    transition: Transition
    angle: float = math.pi / 2
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "transition", Transition(self.transition))
        if self.angle < 0:
            raise ValueError(f"pulse angle must be non-negative, got {self.angle}")
        if self.transition is Transition.CAVITY_EG and self.phase != 0.0:
            raise ValueError("cavity pulses carry no phase")

    @classmethod
    def ramsey(cls, transition: str, detuning: float, delay: float) -> "PulseSpec":
        """Ramsey pulse whose phase is accumulated as ``detuning * delay``."""
        return cls(Transition(f"ramsey_{transition}"), math.pi / 2, detuning * delay)

    def apply(self, state: JointState, Omega: float | None = None) -> JointState:
        if self.transition is Transition.CAVITY_EG:
            if Omega is None:
                raise ValueError("cavity pulse needs the Rabi frequency")
            return cavity_pulse(state, self.angle, Omega)
        if not math.isclose(self.angle, math.pi / 2):
            raise ValueError("Ramsey zones are pi/2 pulses")
        return ramsey_pulse(state, self.transition.value.split("_")[1], self.phase)


@dataclass(frozen=True)
class DispersiveParams:
    epsilon: float
    delta: float
    t_i: float
    omega_r: float = 0.0

    def __post_init__(self):
        if self.delta == 0:
            raise ValueError("dispersive parameters need nonzero detuning")
        if not math.isfinite(self.epsilon):
            raise ValueError("epsilon must be finite")


def ramsey_matrix(phi: float) -> np.ndarray:
    """2x2 map on (a, b) amplitudes; columns are the images of |a> and |b>."""
    s = 1.0 / math.sqrt(2.0)
    return s * np.array([[1.0, -np.exp(-1j * phi)],
                         [np.exp(1j * phi), 1.0]], dtype=complex)


def ramsey_pulse(state: JointState, transition: str, phi: float) -> JointState:
    """pi/2 Ramsey-zone rotation on the ``"eg"`` or ``"gi"`` pair."""
    key = str(transition).lower().replace("ramsey_", "")
    try:
        a, b = _RAMSEY_PAIRS[key]
    except KeyError:
        raise ValueError(f"unknown Ramsey transition {transition!r}") from None
    mat = state.as_matrix()
    ka, kb = LEVELS.index(a), LEVELS.index(b)
    rot = ramsey_matrix(phi)
    out = mat.copy()
    out[[ka, kb]] = rot @ mat[[ka, kb]]
    return JointState(out.ravel(), state.n_max)


def cavity_pulse(state: JointState, angle: float, Omega: float) -> JointState:
    """Resonant cavity crossing of area ``angle`` (= Omega * t_i)."""
    if Omega <= 0:
        raise ValueError(f"Rabi frequency must be positive, got {Omega}")
    return evolve_resonant(state, Omega, angle / Omega)


def dispersive_epsilon(params: CavityParams) -> float:
    """Phase shift per photon for a detuned crossing, in rad."""
    if params.delta == 0:
        raise ValueError("dispersive phase diverges at zero detuning")
    t_i = params.l_cav / params.v
    coupling = params.d ** 2 / (2.0 * constants.epsilon_0 * params.V)
    return t_i * (params.omega / params.delta) * coupling / constants.hbar


def detuning_for_epsilon(epsilon: float, params: CavityParams) -> float:
    """Detuning that makes ``dispersive_epsilon`` return ``epsilon``."""
    if epsilon == 0:
        raise ValueError("zero phase needs infinite detuning")
    t_i = params.l_cav / params.v
    coupling = params.d ** 2 / (2.0 * constants.epsilon_0 * params.V)
    return t_i * params.omega * coupling / (constants.hbar * epsilon)


def dispersive_phases(n_max: int, epsilon: float) -> np.ndarray:
    """Diagonal phase factors, shaped (3, n_max + 1) in (e, g, i) row order."""
    n = np.arange(n_max + 1)
    return np.vstack([np.exp(1j * (n + 1) * epsilon),
                      np.exp(-1j * n * epsilon),
                      np.ones(n_max + 1, dtype=complex)])


def dispersive_interaction(state: JointState, epsilon: float) -> JointState:
    """Detuned crossing: ``|e,n>`` gains ``(n+1) eps``, ``|g,n>`` gains ``-n eps``."""
    out = state.as_matrix() * dispersive_phases(state.n_max, epsilon)
    return JointState(out.ravel(), state.n_max)


def light_shift(n: int, params: DispersiveParams, sign: int, omega: float) -> tuple:
    """Perturbed dressed energies for a detuned manifold (diagnostic only).

    Returns ``((n+1) omega + |delta|/2 + s L, (n+1) omega - |delta|/2 - s L)``
    with ``L = Omega(r)^2 (n+1) / |delta|`` and ``s`` the detuning sign.
    """
    if params.delta == 0:
        raise ValueError("light shift undefined at zero detuning")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    mag = abs(params.delta)
    shift = sign * params.omega_r ** 2 * (n + 1) / mag
    base = (n + 1) * omega
    return base + mag / 2 + shift, base - mag / 2 - shift


def conditional_phase_gate(state: JointState, phi: float) -> JointState:
    """Multiply the ``|g,1>`` amplitude by ``e^{i phi}``.

    Defined only on fields confined to {|0>, |1>}; ``|e,n>`` components pass
    through unchanged.
    """
    mat = state.as_matrix()
    excess = np.linalg.norm(mat[:, 2:])
    if excess > GATE_SUBSPACE_TOL:
        raise SubspaceError(f"field weight above one photon is {excess:.3e}; gate is only defined on n <= 1")
    out = mat.copy()
    out[LEVELS.index(AtomLevel.G), 1] *= np.exp(1j * phi)
    return JointState(out.ravel(), state.n_max)
