"""State-vector core for one atom (levels e, g, i) times one truncated cavity mode.

Amplitudes are stored densely, level-major: the amplitude of ``|level, n>``
sits at ``LEVELS.index(level) * (n_max + 1) + n``.  States are immutable; every
operation returns a new object.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.special import gammainc

from .errors import DegenerateSuperpositionError, DimensionError, TruncationError

DEFAULT_NMAX = 15
NORM_TOL = 1e-10
COHERENT_LEAK_TOL = 1e-10


class AtomLevel(str, Enum):
    E = "e"
    G = "g"
    I = "i"  # noqa: E741  third level, decoupled from the mode

    @classmethod
    def parse(cls, value: Union[str, "AtomLevel"]) -> "AtomLevel":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown atomic level {value!r}; expected one of e, g, i") from None

    def __str__(self) -> str:
        return self.value


LEVELS = (AtomLevel.E, AtomLevel.G, AtomLevel.I)


def _frozen(vec) -> np.ndarray:
    arr = np.array(vec, dtype=complex)
    arr.setflags(write=False)
    return arr


def _check_nmax(n_max: int) -> int:
    n_max = int(n_max)
    if n_max < 1:
        raise DimensionError(f"n_max must be >= 1, got {n_max}")
    return n_max


@dataclass(frozen=True, eq=False)
class JointState:
    """Atom-field ket with ``3 * (n_max + 1)`` complex amplitudes."""

    amplitudes: np.ndarray
    n_max: int

    def __post_init__(self):
        n_max = _check_nmax(self.n_max)
        amps = _frozen(self.amplitudes)
        if amps.shape != (3 * (n_max + 1),):
            raise DimensionError(
                f"expected {3 * (n_max + 1)} amplitudes for n_max={n_max}, got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "n_max", n_max)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def index(self, level, n: int) -> int:
        return state_index(level, n, self.n_max)

    def amp(self, level, n: int) -> complex:
        return complex(self.amplitudes[self.index(level, n)])

    def block(self, level) -> np.ndarray:
        """Unnormalized field amplitudes attached to one atomic level."""
        k = LEVELS.index(AtomLevel.parse(level))
        size = self.n_max + 1
        return self.amplitudes[k * size:(k + 1) * size]

    def as_matrix(self) -> np.ndarray:
        """Amplitudes reshaped to ``(3, n_max + 1)``, rows in (e, g, i) order."""
        return self.amplitudes.reshape(3, self.n_max + 1)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def level_probabilities(self) -> dict:
        mat = self.as_matrix()
        weights = np.sum(np.abs(mat) ** 2, axis=1)
        return {lvl: float(w) for lvl, w in zip(LEVELS, weights)}

    def photon_distribution(self) -> np.ndarray:
        return np.sum(np.abs(self.as_matrix()) ** 2, axis=0)

    def with_amplitudes(self, amps) -> "JointState":
        return JointState(amps, self.n_max)


@dataclass(frozen=True, eq=False)
class FieldState:
    """Cavity-only ket over Fock states ``0..n_max``."""

    amplitudes: np.ndarray
    n_max: int

    def __post_init__(self):
        n_max = _check_nmax(self.n_max)
        amps = _frozen(self.amplitudes)
        if amps.shape != (n_max + 1,):
            raise DimensionError(f"expected {n_max + 1} Fock amplitudes, got shape {amps.shape}")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "n_max", n_max)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def photon_distribution(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def mean_field(self) -> complex:
        """Expectation value of the annihilation operator."""
        a = self.amplitudes
        n = np.arange(1, self.n_max + 1)
        return complex(np.sum(np.conj(a[:-1]) * np.sqrt(n) * a[1:]))


@dataclass(frozen=True, eq=False)
class CoherentField(FieldState):
    alpha: complex = field(default=0j)


def state_index(level, n: int, n_max: int) -> int:
    lvl = AtomLevel.parse(level)
    if not 0 <= n <= n_max:
        raise TruncationError(f"photon number {n} outside truncated basis 0..{n_max}")
    return LEVELS.index(lvl) * (n_max + 1) + int(n)


def make_basis_state(level, n: int, n_max: int = DEFAULT_NMAX) -> JointState:
    n_max = _check_nmax(n_max)
    if n < 0:
        raise ValueError(f"photon number must be non-negative, got {n}")
    amps = np.zeros(3 * (n_max + 1), dtype=complex)
    amps[state_index(level, n, n_max)] = 1.0
    return JointState(amps, n_max)


def fock_state(n: int, n_max: int = DEFAULT_NMAX) -> FieldState:
    n_max = _check_nmax(n_max)
    if not 0 <= n <= n_max:
        raise TruncationError(f"photon number {n} outside truncated basis 0..{n_max}")
    amps = np.zeros(n_max + 1, dtype=complex)
    amps[n] = 1.0
    return FieldState(amps, n_max)


def field_state(amplitudes: Sequence[complex], n_max: int = DEFAULT_NMAX) -> FieldState:
    """Normalized field from leading Fock amplitudes, zero-padded to ``n_max``."""
    coeffs = np.asarray(amplitudes, dtype=complex)
    if coeffs.size > n_max + 1:
        raise TruncationError(f"{coeffs.size} amplitudes do not fit under n_max={n_max}")
    amps = np.zeros(n_max + 1, dtype=complex)
    amps[:coeffs.size] = coeffs
    norm = np.linalg.norm(amps)
    if norm < 1e-12:
        raise DegenerateSuperpositionError("field amplitudes vanish")
    return FieldState(amps / norm, n_max)


def product_state(level, fld: FieldState) -> JointState:
    """``|level> (x) |field>``."""
    amps = np.zeros(3 * (fld.n_max + 1), dtype=complex)
    k = LEVELS.index(AtomLevel.parse(level))
    size = fld.n_max + 1
    amps[k * size:(k + 1) * size] = fld.amplitudes
    return JointState(amps, fld.n_max)


def atom_superposition(coeffs: dict, fld: FieldState) -> JointState:
    """``(sum_l c_l |l>) (x) |field>``, normalized.  ``coeffs`` maps level -> amplitude."""
    amps = np.zeros((3, fld.n_max + 1), dtype=complex)
    for level, c in coeffs.items():
        amps[LEVELS.index(AtomLevel.parse(level))] = c * fld.amplitudes
    norm = np.linalg.norm(amps)
    if norm < 1e-12:
        raise DegenerateSuperpositionError("atomic coefficients vanish")
    return JointState(amps.ravel() / norm, fld.n_max)


def superpose(terms: Iterable) -> JointState:
    """Normalized linear combination of ``(state, coefficient)`` pairs."""
    terms = list(terms)
    if not terms:
        raise DegenerateSuperpositionError("empty superposition")
    n_max = terms[0][0].n_max
    total = np.zeros(3 * (n_max + 1), dtype=complex)
    for state, coeff in terms:
        if state.n_max != n_max:
            raise DimensionError(f"mixed truncations n_max={n_max} and n_max={state.n_max}")
        total = total + complex(coeff) * state.amplitudes
    norm = np.linalg.norm(total)
    if norm <= 1e-12:
        raise DegenerateSuperpositionError(f"superposition has norm {norm:.3e}")
    return JointState(total / norm, n_max)


def coherent_tail(alpha: complex, n_max: int) -> float:
    """Poisson weight of photon numbers above ``n_max`` for mean ``|alpha|^2``."""
    lam = abs(alpha) ** 2
    if lam == 0.0:
        return 0.0
    # regularized lower incomplete gamma P(n_max+1, lam) = Pr[N > n_max]
    return float(gammainc(n_max + 1, lam))


def required_nmax(alpha: complex, tol: float = COHERENT_LEAK_TOL) -> int:
    n = 1
    while coherent_tail(alpha, n) > tol:
        n += 1
    return n


def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    amps = np.empty(n_max + 1, dtype=complex)
    amps[0] = np.exp(-abs(alpha) ** 2 / 2)
    for n in range(n_max):
        amps[n + 1] = amps[n] * alpha / np.sqrt(n + 1)
    return amps


def coherent_field(alpha: complex, n_max: int = DEFAULT_NMAX) -> CoherentField:
    """Truncated coherent state ``|alpha>``; refuses cutoffs that lose more than 1e-10."""
    n_max = _check_nmax(n_max)
    alpha = complex(alpha)
    leak = coherent_tail(alpha, n_max)
    if leak > COHERENT_LEAK_TOL:
        raise TruncationError(
            f"coherent state alpha={alpha} leaks {leak:.3e} above n_max={n_max}; "
            f"need n_max >= {required_nmax(alpha)}"
        )
    return CoherentField(coherent_amplitudes(alpha, n_max), n_max, alpha)


def inner(a, b) -> complex:
    """``<a|b>`` for two states of the same kind and truncation."""
    _check_same_space(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a, b) -> float:
    """Overlap probability ``|<a|b>|^2``."""
    return float(min(1.0, abs(inner(a, b)) ** 2))


def _check_same_space(a, b) -> None:
    kind_a = JointState if isinstance(a, JointState) else FieldState
    if not isinstance(b, kind_a):
        raise DimensionError(f"cannot compare {type(a).__name__} with {type(b).__name__}")
    if a.n_max != b.n_max:
        raise DimensionError(f"truncation mismatch: n_max {a.n_max} vs {b.n_max}")


def project_atom(state: JointState, level) -> tuple:
    """Born probability of ``level`` and the renormalized post-measurement state.

    The collapsed state is ``None`` when the outcome has zero probability.
    """
    lvl = AtomLevel.parse(level)
    mat = state.as_matrix()
    k = LEVELS.index(lvl)
    prob = float(np.sum(np.abs(mat[k]) ** 2))
    if prob <= 0.0:
        return 0.0, None
    out = np.zeros_like(mat)
    out[k] = mat[k] / np.sqrt(prob)
    return prob, JointState(out.ravel(), state.n_max)


def conditional_field(state: JointState, level) -> FieldState:
    """Field left behind after the atom is found in ``level``."""
    block = state.block(level)
    norm = np.linalg.norm(block)
    if norm <= 1e-12:
        raise DegenerateSuperpositionError(f"level {AtomLevel.parse(level)} has no weight")
    return FieldState(block / norm, state.n_max)


def measure_atom(state: JointState, rng: "RngStream") -> tuple:
    """Projective measurement of the atomic level.

    Returns ``(outcome, collapsed_state, probability_of_outcome)``.
    """
    weights = np.sum(np.abs(state.as_matrix()) ** 2, axis=1)
    total = weights.sum()
    if abs(total - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalized (norm^2 = {total!r})")
    u = rng.random() * total
    k = int(np.searchsorted(np.cumsum(weights), u, side="right"))
    k = min(k, 2)
    # guard against landing on a zero-weight level through rounding
    while weights[k] == 0.0:
        k -= 1
    level = LEVELS[k]
    prob, collapsed = project_atom(state, level)
    return level, collapsed, prob


class RngStream:
    """Seeded, counter-based random stream.

    Backed by numpy's Philox4x64-10 bit generator keyed through
    ``SeedSequence(seed, spawn_key=path)``.  A stream is identified by its
    64-bit seed plus an index path; ``substream(k)`` appends ``k`` to the path,
    so per-trajectory streams never depend on how many siblings exist.
    """

    GENERATOR = "philox4x64-10/seedsequence/v1"

    def __init__(self, seed: int, path: Sequence[int] = ()):
        seed = int(seed)
        if not 0 <= seed < 2 ** 64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self.path = tuple(int(p) for p in path)
        seq = np.random.SeedSequence(entropy=seed, spawn_key=self.path)
        self._gen = np.random.Generator(np.random.Philox(seq))

    def substream(self, index: int) -> "RngStream":
        return RngStream(self.seed, self.path + (int(index),))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def random(self, size=None):
        return self._gen.random(size)

    def exponential(self, scale: float = 1.0, size=None):
        return self._gen.exponential(scale, size)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, path={self.path})"
