"""Resonant Jaynes-Cummings dynamics in the interaction picture.

Units: angular frequencies in rad/s, times in s, lengths in m, hbar = 1 for
energies.  The vacuum Rabi frequency is tied to the coupling by
``Omega = 2 * g0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, GridError, TruncationError
from .hilbert import JointState, LEVELS, AtomLevel

LADDER_LEAK_TOL = 1e-10
STRONG_COUPLING_FACTOR = 10.0

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CavityParams:
    """Cavity and atom parameters.

    Defaults are a microwave Rydberg-atom configuration chosen for this
    package (51.1 GHz mode, 130 ms photon lifetime), not measured values.
    ``kappa`` is derived from ``omega / Q`` when left as ``None``.
    ``l_cav`` is the effective interaction length used by the dispersive
    phase; ``None`` means ``sqrt(pi) * w``.
    """

    omega: float = _TWO_PI * 51.1e9
    omega_eg: float = _TWO_PI * 51.1e9
    g0: float = _TWO_PI * 47e3
    Q: float = _TWO_PI * 51.1e9 * 0.13
    kappa: float | None = None
    gamma: float = 1.0 / 0.03
    w: float = 6e-3
    v: float = 500.0
    d: float = 1.506e-26
    V: float = 7.6e-7
    delta: float = 0.0
    l_cav: float | None = None

    def __post_init__(self):
        if not self.g0 >= 0:
            raise ConfigError(f"g0 must be non-negative, got {self.g0}")
        for name in ("Q", "w", "v"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.kappa is None:
            object.__setattr__(self, "kappa", kappa_from_Q(self.omega, self.Q))
        if self.kappa < 0 or self.gamma < 0:
            raise ConfigError("decay rates must be non-negative")
        if self.l_cav is None:
            object.__setattr__(self, "l_cav", math.sqrt(math.pi) * self.w)

    @property
    def Omega(self) -> float:
        """Vacuum Rabi frequency at mode center."""
        return 2.0 * self.g0

    @property
    def strong_coupling(self) -> bool:
        return (self.g0 >= STRONG_COUPLING_FACTOR * self.kappa
                and self.g0 >= STRONG_COUPLING_FACTOR * self.gamma)

    @property
    def interaction_time(self) -> float:
        return interaction_time(self.w, self.v)

    def with_(self, **changes) -> "CavityParams":
        if "Q" in changes and "kappa" not in changes:
            changes["kappa"] = None
        return replace(self, **changes)


@dataclass(frozen=True)
class Spectrum:
    frequencies: np.ndarray
    intensity: np.ndarray

    def __post_init__(self):
        if self.frequencies.shape != self.intensity.shape:
            raise ValueError("frequency and intensity arrays differ in length")

    def local_maxima(self) -> np.ndarray:
        return local_maxima(self.intensity)


def kappa_from_Q(omega: float, Q: float) -> float:
    if not Q > 0:
        raise ConfigError(f"quality factor must be positive, got {Q}")
    return omega / Q


def jc_splitting(n: int, g0: float) -> float:
    """Energy gap of the n-th Jaynes-Cummings doublet."""
    if n < 1:
        raise ValueError(f"ladder rung must be >= 1, got {n}")
    return 2.0 * math.sqrt(n) * g0


def dressed_energies(n: int, params: CavityParams) -> tuple:
    """Upper and lower dressed energies of the manifold {|e,n>, |g,n+1>} on resonance."""
    if n < 0:
        raise ValueError(f"manifold index must be >= 0, got {n}")
    if params.delta != 0:
        raise ValueError("dressed_energies is resonant-only; use the dispersive light shift for delta != 0")
    center = (n + 1.5) * params.omega
    half = math.sqrt(n + 1) * params.g0
    return center + half, center - half


def interaction_time(w: float, v: float) -> float:
    """Effective transit time sqrt(pi) * w / v through a Gaussian mode."""
    if not (w > 0 and v > 0):
        raise ValueError(f"waist and velocity must be positive, got w={w}, v={v}")
    return math.sqrt(math.pi) * w / v


def evolve_resonant(state: JointState, Omega: float, t: float) -> JointState:
    """Resonant vacuum-Rabi evolution for time ``t``.

    Each manifold {|e,n>, |g,n+1>} rotates at ``Omega * sqrt(n+1)``;
    ``|g,0>`` and the i-level are untouched.  ``|e,n_max>`` has no partner
    inside the cutoff and must carry no more than 1e-10 amplitude.
    """
    n_max = state.n_max
    mat = state.as_matrix()
    ke, kg = LEVELS.index(AtomLevel.E), LEVELS.index(AtomLevel.G)
    top = abs(mat[ke, n_max])
    if top > LADDER_LEAK_TOL:
        raise TruncationError(
            f"|e,{n_max}> carries amplitude {top:.3e}; raise n_max above {n_max}"
        )
    n = np.arange(n_max)
    theta = 0.5 * Omega * np.sqrt(n + 1) * t
    c, s = np.cos(theta), np.sin(theta)
    ce = mat[ke, :n_max]
    cg = mat[kg, 1:]
    out = mat.copy()
    out[ke, :n_max] = c * ce - s * cg
    out[kg, 1:] = s * ce + c * cg
    return JointState(out.ravel(), n_max)


def excited_probability(state: JointState) -> float:
    return float(np.sum(np.abs(state.block(AtomLevel.E)) ** 2))


def rabi_probability(Omega: float, t) -> np.ndarray:
    """Closed-form excited population after vacuum Rabi evolution from |e,0>."""
    return 0.5 * (1.0 + np.cos(Omega * np.asarray(t)))


def _lorentzian(x, center, hwhm):
    return hwhm ** 2 / ((x - center) ** 2 + hwhm ** 2)


def default_spectrum_grid(params: CavityParams, span: float = 4.0, points: int = 801) -> np.ndarray:
    """Symmetric probe grid ``omega + [-span*g0, span*g0]`` that hits ``omega`` exactly."""
    if points % 2 == 0:
        points += 1
    offsets = np.linspace(-span * params.g0, span * params.g0, points)
    offsets[points // 2] = 0.0
    return params.omega + offsets


def vacuum_rabi_spectrum(params: CavityParams, atom_present: bool, grid) -> Spectrum:
    """Phenomenological transmission spectrum.

    Empty cavity: unit-height Lorentzian at ``omega`` with half-width
    ``kappa/2``.  With an atom: two equal-weight Lorentzians at
    ``omega +- g0`` with half-width ``(kappa + gamma)/4``, each carrying
    half the empty-cavity area.
    """
    freqs = np.asarray(grid, dtype=float)
    if freqs.ndim != 1 or freqs.size < 3:
        raise GridError("spectrum grid needs at least three points")
    g0 = params.g0
    step = float(np.max(np.diff(freqs)))
    if g0 > 0:
        if freqs[0] > params.omega - 3 * g0 or freqs[-1] < params.omega + 3 * g0:
            raise GridError("grid must span omega +- 3 g0")
        if step > g0 / 50:
            raise GridError(f"grid step {step:.4g} rad/s too coarse to resolve 2 g0 = {2 * g0:.4g} rad/s")
    empty_hw = params.kappa / 2
    if not atom_present:
        return Spectrum(freqs, _lorentzian(freqs, params.omega, empty_hw))
    hw = (params.kappa + params.gamma) / 4
    height = 0.5 * empty_hw / hw
    intensity = height * (_lorentzian(freqs, params.omega + g0, hw)
                          + _lorentzian(freqs, params.omega - g0, hw))
    return Spectrum(freqs, intensity)


def local_maxima(y) -> np.ndarray:
    """Indices of strict interior local maxima (plateaus report their left edge)."""
    y = np.asarray(y)
    idx = []
    i = 1
    while i < y.size - 1:
        if y[i] > y[i - 1]:
            j = i
            while j < y.size - 1 and y[j + 1] == y[j]:
                j += 1
            if j < y.size - 1 and y[j + 1] < y[j]:
                idx.append(i)
            i = j + 1
        else:
            i += 1
    return np.array(idx, dtype=int)
