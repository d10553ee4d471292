"""Stochastic open-system layer.

The cavity photon number is restricted to {0, 1} and follows a two-state
thermal jump process: births at ``kappa * nbar``, deaths at
``kappa * (1 + nbar)``, sampled with exact exponential waiting times.  QND
probe atoms read the photon number without disturbing it; their ideal
response is derived from the pulse algebra (Ramsey - dispersive - Ramsey).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CalibrationError, ConfigError
from .hilbert import AtomLevel, RngStream, make_basis_state
from .pulses import dispersive_interaction, ramsey_pulse

PROBE_NMAX = 2


def nbar_from_p1(p1: float) -> float:
    """Thermal occupation giving steady-state one-photon probability ``p1``."""
    if not 0 <= p1 < 1 / 3:
        raise ConfigError(f"p1 must lie in [0, 1/3), got {p1}")
    return p1 / (1.0 - 2.0 * p1)


def p1_from_nbar(nbar: float) -> float:
    return nbar / (1.0 + 2.0 * nbar)


@dataclass(frozen=True)
class BathParams:
    kappa: float = 1.0 / 0.13
    p1: float = 0.05
    nbar: float | None = None

    def __post_init__(self):
        if not self.kappa > 0:
            raise ConfigError(f"bath kappa must be positive, got {self.kappa}")
        expected = nbar_from_p1(self.p1)
        if self.nbar is None:
            object.__setattr__(self, "nbar", expected)
        elif not math.isclose(self.nbar, expected, rel_tol=1e-9, abs_tol=1e-15):
            raise ConfigError(f"nbar={self.nbar} inconsistent with p1={self.p1} (expected {expected})")

    @property
    def birth_rate(self) -> float:
        return self.kappa * self.nbar

    @property
    def death_rate(self) -> float:
        return self.kappa * (1.0 + self.nbar)

    @property
    def relaxation_rate(self) -> float:
        return self.birth_rate + self.death_rate

    def occupancy(self, t, p1_initial: float):
        """Analytic P(n=1) at time ``t`` for the two-state master equation."""
        t = np.asarray(t, dtype=float)
        return self.p1 + (p1_initial - self.p1) * np.exp(-self.relaxation_rate * t)


@dataclass(frozen=True)
class ProbeConfig:
    epsilon_per_photon: float = math.pi / 2
    r2_phase: float | None = None
    probe_interval: float = 0.01
    dark_count_prob: float = 0.0
    detection_efficiency: float = 1.0

    def __post_init__(self):
        for name in ("dark_count_prob", "detection_efficiency"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ConfigError(f"{name} must be a probability, got {val}")
        if not self.probe_interval > 0:
            raise ConfigError(f"probe_interval must be positive, got {self.probe_interval}")
        if self.r2_phase is None:
            object.__setattr__(self, "r2_phase", calibrate_r2_phase(self.epsilon_per_photon))

    @property
    def ideal(self) -> bool:
        return self.dark_count_prob == 0.0 and self.detection_efficiency == 1.0

    def idealized(self) -> "ProbeConfig":
        return ProbeConfig(self.epsilon_per_photon, self.r2_phase, self.probe_interval, 0.0, 1.0)


@dataclass
class TrajectoryRecord:
    jump_times: list = field(default_factory=list)      # (t, "birth" | "death")
    probe_times: list = field(default_factory=list)     # (t, "e" | "g")
    duration: float = 0.0
    seed: int = 0
    initial_n: int = 0
    stream: tuple = ()

    def photon_number(self, t) -> np.ndarray:
        """True photon number just after time(s) ``t``."""
        times = np.array([jt for jt, _ in self.jump_times])
        flips = np.searchsorted(times, np.asarray(t, dtype=float), side="right")
        return (self.initial_n + flips) % 2

    def occupied_time(self) -> float:
        return _occupied_time(np.array([jt for jt, _ in self.jump_times]), self.initial_n, self.duration)

    def deaths(self) -> int:
        return sum(1 for _, ev in self.jump_times if ev == "death")


def _occupied_time(times: np.ndarray, initial_n: int, duration: float) -> float:
    edges = np.concatenate(([0.0], times, [duration]))
    spans = np.diff(edges)
    states = (initial_n + np.arange(spans.size)) % 2
    return float(np.sum(spans[states == 1]))


def _after_dispersive(epsilon: float, n: int):
    state = make_basis_state(AtomLevel.E, n, PROBE_NMAX)
    state = ramsey_pulse(state, "eg", 0.0)
    state = dispersive_interaction(state, epsilon)
    return state


@lru_cache(maxsize=64)
def _pre_r2_amplitudes(epsilon: float, n: int) -> tuple:
    state = _after_dispersive(epsilon, n)
    return state.amp(AtomLevel.E, n), state.amp(AtomLevel.G, n)


def calibrate_r2_phase(epsilon: float) -> float:
    """Second-zone phase that sends the probe atom to g when the cavity is empty.

    After the first zone and the dispersive crossing the atom carries
    amplitudes (c_e, c_g); the second zone leaves ``(c_e - e^{-i phi} c_g)/sqrt(2)``
    on e, which vanishes for ``phi = -arg(c_e / c_g)``.
    """
    c_e, c_g = _pre_r2_amplitudes(float(epsilon), 0)
    phi = -np.angle(c_e / c_g)
    phi = float(math.remainder(phi, 2 * math.pi))
    if probe_excited_probability(0, epsilon, phi) > 1e-9:
        raise CalibrationError("could not null the excited-state output for an empty cavity")
    return phi


def probe_excited_probability(photon_n: int, epsilon: float, r2_phase: float) -> float:
    """Ideal P(e) of one probe atom for a cavity holding ``photon_n`` photons."""
    state = _after_dispersive(epsilon, photon_n)
    state = ramsey_pulse(state, "eg", r2_phase)
    return float(np.sum(np.abs(state.block(AtomLevel.E)) ** 2))


@lru_cache(maxsize=64)
def _ideal_response(epsilon: float, r2_phase: float) -> tuple:
    p_g0 = 1.0 - probe_excited_probability(0, epsilon, r2_phase)
    if p_g0 < 1.0 - 1e-9:
        raise CalibrationError(
            f"r2_phase={r2_phase} is not calibrated: P(g | n=0) = {p_g0:.12f}"
        )
    return (probe_excited_probability(0, epsilon, r2_phase),
            probe_excited_probability(1, epsilon, r2_phase))


def ideal_probe_response(probe: ProbeConfig) -> tuple:
    """(P(e | n=0), P(e | n=1)) from the pulse algebra, after calibration check."""
    return _ideal_response(float(probe.epsilon_per_photon), float(probe.r2_phase))


def _apply_imperfections(ideal_e: np.ndarray, probe: ProbeConfig, u: np.ndarray) -> np.ndarray:
    # ideal g -> e with dark_count_prob; ideal e -> g with 1 - efficiency
    flip_up = ~ideal_e & (u < probe.dark_count_prob)
    flip_down = ideal_e & (u < 1.0 - probe.detection_efficiency)
    return (ideal_e | flip_up) & ~flip_down


def probe_photon(photon_n: int, probe: ProbeConfig, rng: RngStream) -> str:
    """Single QND probe atom; returns ``"e"`` or ``"g"``."""
    if photon_n not in (0, 1):
        raise ValueError(f"probe model covers photon numbers 0 and 1, got {photon_n}")
    p_e = ideal_probe_response(probe)[photon_n]
    u = rng.random(2)
    ideal_e = np.array([u[0] < p_e])
    out = _apply_imperfections(ideal_e, probe, u[1:])
    return "e" if out[0] else "g"


def _jump_times(bath: BathParams, duration: float, initial_n: int, rng: RngStream) -> np.ndarray:
    times = []
    t = 0.0
    n = initial_n
    rates = (bath.birth_rate, bath.death_rate)
    while True:
        rate = rates[n]
        if rate <= 0.0:
            break
        t += rng.exponential(1.0 / rate)
        if t > duration:
            break
        times.append(t)
        n ^= 1
    return np.array(times)


def _simulate(bath: BathParams, probe: ProbeConfig, duration: float, initial_n: int,
              rng: RngStream, with_probes: bool = True):
    times = _jump_times(bath, duration, initial_n, rng)
    if not with_probes:
        return times, None, None, None
    count = int(math.floor(duration / probe.probe_interval * (1 + 1e-12)))
    probe_t = np.arange(1, count + 1) * probe.probe_interval
    probe_t = probe_t[probe_t <= duration]
    n_at = (initial_n + np.searchsorted(times, probe_t, side="right")) % 2
    p_e = np.asarray(ideal_probe_response(probe))[n_at]
    u = rng.random((2, probe_t.size))
    outcome = _apply_imperfections(u[0] < p_e, probe, u[1])
    return times, probe_t, outcome, n_at


def qnd_trajectory(bath: BathParams, probe: ProbeConfig, duration: float,
                   initial_n: int, rng: RngStream) -> TrajectoryRecord:
    """One realization of photon birth/death tracked by periodic QND probes.

    Probes fire every ``probe.probe_interval`` starting one interval in.  Jump
    times are drawn first, then probe outcomes, both from ``rng``; probes never
    feed back on the photon number.
    """
    if not duration > 0:
        raise ConfigError(f"duration must be positive, got {duration}")
    if initial_n not in (0, 1):
        raise ConfigError(f"initial photon number must be 0 or 1, got {initial_n}")
    times, probe_t, outcome, _ = _simulate(bath, probe, duration, initial_n, rng)
    events = [(float(t), "birth" if (initial_n + k) % 2 == 0 else "death")
              for k, t in enumerate(times)]
    probes = [(float(t), "e" if o else "g") for t, o in zip(probe_t, outcome)]
    return TrajectoryRecord(events, probes, float(duration), rng.seed, initial_n, rng.path)


@dataclass
class EnsembleSummary:
    trajectories: int
    duration: float
    occupancy: float
    occupancy_stderr: float
    total_occupied_time: float
    deaths: int
    dwell_time: float
    dwell_time_stderr: float
    probes_at_0: int
    mismatches_at_0: int
    probes_at_1: int
    mismatches_at_1: int


def steady_initial_n(bath: BathParams, rng: RngStream) -> int:
    return int(rng.random() < bath.p1)


def run_ensemble(bath: BathParams, probe: ProbeConfig, duration: float, trajectories: int,
                 master: RngStream, initial_n: int | None = None,
                 with_probes: bool = True) -> EnsembleSummary:
    """Aggregate statistics over independent trajectories.

    Trajectory ``k`` uses ``master.substream(k)``.  With ``initial_n=None`` the
    starting photon number is drawn from the steady state (first uniform of
    each substream), making the ensemble stationary.

    Dwell time is the censored-exponential estimate: total time spent with a
    photon divided by the number of observed deaths.
    """
    if trajectories < 1:
        raise ConfigError("need at least one trajectory")
    occ = np.empty(trajectories)
    deaths = 0
    counts = np.zeros((2, 2), dtype=np.int64)   # [true n, mismatch]
    for k in range(trajectories):
        rng = master.substream(k)
        n0 = steady_initial_n(bath, rng) if initial_n is None else initial_n
        times, _, outcome, n_at = _simulate(bath, probe, duration, n0, rng, with_probes)
        occ[k] = _occupied_time(times, n0, duration)
        deaths += times.size // 2 + (times.size % 2 if n0 == 1 else 0)
        if with_probes:
            mism = outcome != (n_at == 1)
            for n in (0, 1):
                sel = n_at == n
                counts[n, 0] += int(sel.sum())
                counts[n, 1] += int(mism[sel].sum())
    frac = occ / duration
    total = float(occ.sum())
    dwell = total / deaths if deaths else math.inf
    return EnsembleSummary(
        trajectories=trajectories,
        duration=float(duration),
        occupancy=float(frac.mean()),
        occupancy_stderr=float(frac.std(ddof=1) / math.sqrt(trajectories)) if trajectories > 1 else math.nan,
        total_occupied_time=total,
        deaths=int(deaths),
        dwell_time=dwell,
        dwell_time_stderr=dwell / math.sqrt(deaths) if deaths else math.inf,
        probes_at_0=int(counts[0, 0]),
        mismatches_at_0=int(counts[0, 1]),
        probes_at_1=int(counts[1, 0]),
        mismatches_at_1=int(counts[1, 1]),
    )


def damped_rabi_probability(t, Omega: float, T2: float):
    """Excited population with contrast decaying as ``exp(-t/T2)`` about 1/2."""
    if not T2 > 0:
        raise ValueError(f"T2 must be positive, got {T2}")
    t = np.asarray(t, dtype=float)
    return 0.5 + 0.5 * np.exp(-t / T2) * np.cos(Omega * t)
