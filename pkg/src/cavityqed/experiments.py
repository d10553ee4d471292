"""Canonical cavity-QED experiments as reproducible, tabular runs.

Each ``run_*`` function takes an :class:`ExperimentConfig` and returns a
:class:`ResultTable`.  In ideal mode (``cfg.ideal``) results are exact
pulse-algebra compositions; otherwise finite-shot sampling (and, for QND,
detector imperfections) is layered on top with binomial error columns.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.linalg import expm

from . import __version__
from .decoherence import (BathParams, ProbeConfig, damped_rabi_probability, qnd_trajectory,
                          run_ensemble, steady_initial_n)
from .dynamics import (CavityParams, default_spectrum_grid, evolve_resonant, excited_probability,
                       local_maxima, vacuum_rabi_spectrum)
from .errors import CalibrationError, ConfigError, TruncationError
from .hilbert import (DEFAULT_NMAX, AtomLevel, FieldState, JointState, RngStream, conditional_field,
                      field_state, fock_state, make_basis_state, measure_atom, product_state,
                      project_atom)
from .pulses import cavity_pulse, ramsey_pulse

INJECTION_LEAK_TOL = 1e-8
CALIBRATION_TOL = 1e-12


@dataclass(frozen=True)
class ScanSpec:
    variable: str
    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.points < 2:
            raise ConfigError(f"scan needs at least 2 points, got {self.points}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class ExperimentConfig:
    cavity: CavityParams = field(default_factory=CavityParams)
    bath: BathParams | None = None
    probe: ProbeConfig = field(default_factory=ProbeConfig)
    scan: ScanSpec | None = None
    seed: int = 0
    trajectories: int = 1000
    n_max: int = DEFAULT_NMAX
    T2: float = 40e-6
    alpha: float = 0.5
    duration: float = 2.0
    ideal: bool = False
    record_trajectories: int = 1
    cnot_phase: float = 0.0

    def __post_init__(self):
        if self.bath is None:
            object.__setattr__(self, "bath", BathParams(kappa=self.cavity.kappa))
        if self.trajectories < 1:
            raise ConfigError(f"trajectories must be >= 1, got {self.trajectories}")
        if self.T2 <= 0:
            raise ConfigError(f"T2 must be positive, got {self.T2}")
        if self.duration <= 0:
            raise ConfigError(f"duration must be positive, got {self.duration}")

    def scan_values(self, variable: str, start: float, stop: float, points: int) -> np.ndarray:
        spec = self.scan if self.scan is not None else ScanSpec(variable, start, stop, points)
        return spec.values()

    def echo(self) -> dict:
        d = asdict(self)
        d["scan"] = None if self.scan is None else asdict(self.scan)
        return d


@dataclass
class ResultTable:
    columns: dict
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"ragged columns: {sorted(lengths)}")

    def __getitem__(self, name):
        return self.columns[name]

    def __len__(self) -> int:
        return len(next(iter(self.columns.values()))) if self.columns else 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        names = list(self.columns)
        writer.writerow(names)
        cols = [self.columns[n] for n in names]
        for i in range(len(self)):
            writer.writerow([_fmt(c[i]) for c in cols])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ResultTable":
        rows = list(csv.reader(io.StringIO(text)))
        names, body = rows[0], rows[1:]
        columns = {}
        for j, name in enumerate(names):
            raw = [r[j] for r in body]
            columns[name] = _parse_column(raw)
        return cls(columns)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _parse_column(raw):
    try:
        if all(s.lstrip("-").isdigit() for s in raw):
            return np.array([int(s) for s in raw], dtype=np.int64)
        return np.array([float(s) for s in raw])
    except ValueError:
        return np.array(raw, dtype=object)


def _metadata(cfg: ExperimentConfig, experiment: str, **extra) -> dict:
    meta = {"experiment": experiment, "version": __version__, "config": cfg.echo()}
    meta.update(extra)
    return meta


def fit_fringe(phase, y) -> dict:
    """Least-squares fit of ``A + B cos(phase - phase0)`` with ``B >= 0``."""
    phase = np.asarray(phase, dtype=float)
    design = np.column_stack([np.ones_like(phase), np.cos(phase), np.sin(phase)])
    (a, c, s), *_ = np.linalg.lstsq(design, np.asarray(y, dtype=float), rcond=None)
    amp = math.hypot(c, s)
    phase0 = math.atan2(s, c) % (2 * math.pi) if amp > 0 else 0.0
    return {"offset": float(a), "amplitude": float(amp), "phase": float(phase0)}


def fringe_shift(fit_a: dict, fit_b: dict) -> float:
    """Phase offset of fringe b relative to fringe a, wrapped to [0, 2 pi)."""
    return (fit_b["phase"] - fit_a["phase"]) % (2 * math.pi)


def _sample_fraction(p, shots: int, rng: RngStream):
    p = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    counts = rng.generator.binomial(shots, p)
    frac = counts / shots
    err = np.sqrt(np.maximum(frac * (1 - frac), 0.0) / shots)
    return frac, err


# ---------------------------------------------------------------- Rabi scan

def run_rabi_scan(cfg: ExperimentConfig) -> ResultTable:
    """Vacuum Rabi oscillation of an e atom entering an empty cavity."""
    Omega = cfg.cavity.Omega
    period = 2 * math.pi / Omega
    t = cfg.scan_values("t_i", 0.0, 3 * period, 601)
    if np.any(t < 0):
        raise ConfigError("interaction times must be non-negative")
    start = make_basis_state(AtomLevel.E, 0, cfg.n_max)
    p_e = np.array([excited_probability(evolve_resonant(start, Omega, ti)) for ti in t])
    damped = damped_rabi_probability(t, Omega, cfg.T2)
    named = {}
    for label, angle in (("pi/2", math.pi / 2), ("pi", math.pi), ("2pi", 2 * math.pi)):
        ti = angle / Omega
        named[label] = {
            "t_i": ti,
            "p_e": excited_probability(evolve_resonant(start, Omega, ti)),
            "p_e_damped": float(damped_rabi_probability(ti, Omega, cfg.T2)),
        }
    cols = {"t_i": t, "omega_t": Omega * t, "p_e": p_e, "p_e_damped": damped}
    return ResultTable(cols, _metadata(cfg, "rabi", Omega=Omega, named_pulses=named))


# ---------------------------------------------------------- mode splitting

def run_mode_splitting(cfg: ExperimentConfig) -> ResultTable:
    """Empty-cavity versus one-atom transmission spectra."""
    cav = cfg.cavity
    if cfg.scan is not None:
        grid = cav.omega + cfg.scan.values()
    elif cav.g0 > 0:
        grid = default_spectrum_grid(cav)
    else:
        width = 10 * max(cav.kappa, cav.gamma, 1.0)
        offsets = np.linspace(-width, width, 801)
        offsets[400] = 0.0
        grid = cav.omega + offsets
    empty = vacuum_rabi_spectrum(cav, False, grid)
    atom = vacuum_rabi_spectrum(cav, True, grid)
    step = float(np.max(np.diff(grid)))
    peaks = local_maxima(atom.intensity)
    empty_peak = float(grid[int(np.argmax(empty.intensity))])
    if peaks.size >= 2:
        top = peaks[np.argsort(atom.intensity[peaks])[-2:]]
        lo, hi = sorted(grid[top])
        separation = float(hi - lo)
    else:
        lo = hi = float(grid[int(np.argmax(atom.intensity))])
        separation = 0.0
    cols = {
        "frequency": grid,
        "detuning": grid - cav.omega,
        "empty": empty.intensity,
        "atom": atom.intensity,
    }
    meta = _metadata(cfg, "splitting", empty_peak=empty_peak, atom_peaks=[float(lo), float(hi)],
                     separation=separation, expected_separation=2 * cav.g0, grid_step=step)
    return ResultTable(cols, meta)


# ---------------------------------------------------------- Ramsey fringes

def ramsey_sequence(level, transition: str, phi: float, n_max: int = DEFAULT_NMAX,
                    photon_n: int = 0) -> JointState:
    state = make_basis_state(level, photon_n, n_max)
    state = ramsey_pulse(state, transition, 0.0)
    return ramsey_pulse(state, transition, phi)


def run_ramsey_fringes(cfg: ExperimentConfig) -> ResultTable:
    """Two pi/2 zones on the e-g transition with no cavity in between.

    With the zone convention used here, two in-phase zones take e to g, so
    the ideal fringe is ``P_e = sin^2(phi / 2)``.
    """
    phi = cfg.scan_values("phi", 0.0, 4 * math.pi, 201)
    p_e = np.empty_like(phi)
    p_g = np.empty_like(phi)
    for k, ph in enumerate(phi):
        probs = ramsey_sequence(AtomLevel.E, "eg", ph, cfg.n_max).level_probabilities()
        p_e[k], p_g[k] = probs[AtomLevel.E], probs[AtomLevel.G]
    cols = {"phi": phi, "p_e": p_e, "p_g": p_g, "p_e_oracle": np.sin(phi / 2) ** 2}
    fit = fit_fringe(phi, p_e)
    meta = _metadata(cfg, "ramsey", fit=fit, contrast=float(p_e.max() - p_e.min()))
    if not cfg.ideal:
        frac, err = _sample_fraction(p_e, cfg.trajectories, RngStream(cfg.seed, (1,)))
        cols["p_e_sampled"], cols["p_e_err"] = frac, err
    return ResultTable(cols, meta)


# ------------------------------------------------------- phase-gate fringes

def inject_photon(cfg: ExperimentConfig, rng: RngStream | None = None) -> tuple:
    """Load one photon with an e atom on a pi crossing.

    Returns ``(field, retries)``.  With ``rng`` the first atom is measured and
    the attempt repeated until it is found in g.
    """
    Omega = cfg.cavity.Omega
    retries = 0
    while True:
        state = cavity_pulse(make_basis_state(AtomLevel.E, 0, cfg.n_max), math.pi, Omega)
        if rng is None:
            prob, collapsed = project_atom(state, AtomLevel.G)
            if prob < 1 - 1e-12:
                raise CalibrationError(f"pi crossing leaves P(g) = {prob}")
            return conditional_field(collapsed, AtomLevel.G), retries
        level, collapsed, _ = measure_atom(state, rng)
        if level is AtomLevel.G:
            return conditional_field(collapsed, AtomLevel.G), retries
        retries += 1
        if retries > 1000:
            raise CalibrationError("photon injection keeps failing")


def phase_gate_sequence(fld: FieldState, phi: float, Omega: float) -> JointState:
    state = product_state(AtomLevel.G, fld)
    state = ramsey_pulse(state, "gi", 0.0)
    state = cavity_pulse(state, 2 * math.pi, Omega)
    return ramsey_pulse(state, "gi", phi)


def run_phase_gate_fringes(cfg: ExperimentConfig) -> ResultTable:
    """g-i Ramsey fringes of an atom crossing on a 2 pi pulse, cavity empty vs one photon."""
    Omega = cfg.cavity.Omega
    phi = cfg.scan_values("phi", 0.0, 4 * math.pi, 201)
    vacuum = fock_state(0, cfg.n_max)
    rng = None if cfg.ideal else RngStream(cfg.seed, (2,))
    one, retries = inject_photon(cfg, rng)
    p_g0 = np.array([phase_gate_sequence(vacuum, ph, Omega).level_probabilities()[AtomLevel.G] for ph in phi])
    p_g1 = np.array([phase_gate_sequence(one, ph, Omega).level_probabilities()[AtomLevel.G] for ph in phi])
    fit0, fit1 = fit_fringe(phi, p_g0), fit_fringe(phi, p_g1)
    cols = {"phi": phi, "p_g_0photon": p_g0, "p_g_1photon": p_g1}
    if rng is not None:
        cols["p_g_0photon_sampled"], cols["p_g_0photon_err"] = _sample_fraction(p_g0, cfg.trajectories, rng)
        cols["p_g_1photon_sampled"], cols["p_g_1photon_err"] = _sample_fraction(p_g1, cfg.trajectories, rng)
    meta = _metadata(cfg, "phase-gate", fit_0photon=fit0, fit_1photon=fit1,
                     shift=fringe_shift(fit0, fit1), injection_retries=retries)
    return ResultTable(cols, meta)


# ---------------------------------------------------- coherent injection

def displacement_matrix(beta: complex, dim: int) -> np.ndarray:
    """``exp(beta a^dag - beta^* a)`` on the first ``dim`` Fock states."""
    a = np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)
    return expm(beta * a.conj().T - np.conj(beta) * a)


def inject_coherent(fld: FieldState, beta: complex) -> FieldState:
    """Displace the cavity field by ``beta``.

    The displacement is exponentiated on an enlarged Fock space so that the
    weight pushed above ``n_max`` can be measured; more than 1e-8 there is a
    truncation error.
    """
    beta = complex(beta)
    pad = fld.n_max + 30 + int(math.ceil(4 * abs(beta) ** 2 + 8 * abs(beta)))
    vec = np.zeros(pad + 1, dtype=complex)
    vec[:fld.n_max + 1] = fld.amplitudes
    out = displacement_matrix(beta, pad + 1) @ vec
    leak = float(np.sum(np.abs(out[fld.n_max + 1:]) ** 2))
    if leak > INJECTION_LEAK_TOL:
        raise TruncationError(f"displacement by {beta} leaks {leak:.3e} above n_max={fld.n_max}")
    kept = out[:fld.n_max + 1]
    return FieldState(kept / np.linalg.norm(kept), fld.n_max)


# ------------------------------------------------------------ field phase

def field_phase_branches(cfg: ExperimentConfig) -> dict:
    """Second-atom outcome probabilities and the field it leaves behind."""
    Omega = cfg.cavity.Omega
    fld = field_state([1, 1], cfg.n_max)
    state = product_state(AtomLevel.G, fld)
    state = ramsey_pulse(state, "gi", 0.0)
    state = cavity_pulse(state, 2 * math.pi, Omega)
    out = {}
    for level in (AtomLevel.G, AtomLevel.I):
        prob, collapsed = project_atom(state, level)
        out[level] = (prob, conditional_field(collapsed, level))
    return out


def probe_third_atom(fld: FieldState, Omega: float) -> tuple:
    """Third atom in g on a pi crossing; returns (P_e, field weight at n >= 2)."""
    state = cavity_pulse(product_state(AtomLevel.G, fld), math.pi, Omega)
    high = float(np.sum(fld.photon_distribution()[2:]))
    return excited_probability(state), high


def run_field_phase_experiment(cfg: ExperimentConfig) -> ResultTable:
    """Conditional field phase read out by coherent injection and a third atom."""
    Omega = cfg.cavity.Omega
    theta = cfg.scan_values("theta", 0.0, 4 * math.pi, 201)
    branches = field_phase_branches(cfg)
    cols = {"theta": theta}
    for level in (AtomLevel.G, AtomLevel.I):
        prob, fld = branches[level]
        p_e = np.empty_like(theta)
        high = np.empty_like(theta)
        for k, th in enumerate(theta):
            shifted = inject_coherent(fld, cfg.alpha * np.exp(1j * th))
            p_e[k], high[k] = probe_third_atom(shifted, Omega)
        cols[f"p_e_given_{level}"] = p_e
        cols[f"p_second_{level}"] = np.full_like(theta, prob)
        cols[f"n_ge2_given_{level}"] = high
    fit_g = fit_fringe(theta, cols["p_e_given_g"])
    fit_i = fit_fringe(theta, cols["p_e_given_i"])
    if not cfg.ideal:
        rng = RngStream(cfg.seed, (3,))
        shots_g = rng.generator.binomial(cfg.trajectories, branches[AtomLevel.G][0], size=theta.size)
        for level, shots in ((AtomLevel.G, shots_g), (AtomLevel.I, cfg.trajectories - shots_g)):
            p = np.clip(cols[f"p_e_given_{level}"], 0, 1)
            hits = rng.generator.binomial(shots, p)
            safe = np.maximum(shots, 1)
            frac = np.where(shots > 0, hits / safe, np.nan)
            cols[f"p_e_given_{level}_sampled"] = frac
            cols[f"p_e_given_{level}_err"] = np.sqrt(np.maximum(frac * (1 - frac), 0) / safe)
            cols[f"shots_{level}"] = shots.astype(np.int64)
    meta = _metadata(cfg, "field-phase", fit_given_g=fit_g, fit_given_i=fit_i,
                     shift=fringe_shift(fit_i, fit_g))
    return ResultTable(cols, meta)


# ------------------------------------------------------------------ CNOT

def calibrate_cnot(phi_a: float, Omega: float, n_max: int = DEFAULT_NMAX) -> float:
    """Second g-i zone phase that makes the empty-cavity branch the identity.

    After the first zone ``|g,0>`` carries amplitudes (c_g, c_i); the second
    zone leaves ``(e^{i phi_b} c_g + c_i)/sqrt(2)`` on i, so ``phi_b = arg(-c_i/c_g)``.
    The full sequence is then checked on both basis inputs.
    """
    state = ramsey_pulse(make_basis_state(AtomLevel.G, 0, n_max), "gi", phi_a)
    c_g, c_i = state.amp(AtomLevel.G, 0), state.amp(AtomLevel.I, 0)
    phi_b = float(np.angle(-c_i / c_g)) % (2 * math.pi)
    for level in (AtomLevel.G, AtomLevel.I):
        start = make_basis_state(level, 0, n_max)
        out = apply_cnot(start, phi_a, phi_b, Omega)
        if np.max(np.abs(out.amplitudes - start.amplitudes)) > CALIBRATION_TOL:
            raise CalibrationError(f"empty-cavity branch is not the identity on |{level},0>")
    return phi_b


def apply_cnot(state: JointState, phi_a: float, phi_b: float, Omega: float) -> JointState:
    """Zone(phi_a), 2 pi crossing, zone(phi_b) on the g-i target."""
    state = ramsey_pulse(state, "gi", phi_a)
    state = cavity_pulse(state, 2 * math.pi, Omega)
    return ramsey_pulse(state, "gi", phi_b)


def run_cnot(control: int, target, cfg: ExperimentConfig, rng: RngStream | None = None) -> tuple:
    """Photon-controlled NOT on a g/i target atom; returns ``(photons_out, target_out)``."""
    if control not in (0, 1):
        raise ValueError(f"control photon number must be 0 or 1, got {control}")
    target = AtomLevel.parse(target)
    if target is AtomLevel.E:
        raise ValueError("target qubit lives on levels g and i")
    Omega = cfg.cavity.Omega
    phi_a = cfg.cnot_phase
    phi_b = calibrate_cnot(phi_a, Omega, cfg.n_max)
    start = product_state(target, fock_state(control, cfg.n_max))
    out = apply_cnot(start, phi_a, phi_b, Omega)
    before, after = start.photon_distribution(), out.photon_distribution()
    if np.max(np.abs(before - after)) > 1e-12:
        raise CalibrationError("gate disturbed the control photon number")
    if rng is None:
        rng = RngStream(cfg.seed, (4, control, "gi".index(target.value)))
    level, collapsed, _ = measure_atom(out, rng)
    photons = int(np.argmax(collapsed.photon_distribution()))
    return photons, level


def cnot_truth_table(cfg: ExperimentConfig) -> ResultTable:
    Omega = cfg.cavity.Omega
    phi_b = calibrate_cnot(cfg.cnot_phase, Omega, cfg.n_max)
    cols = {k: [] for k in ("control_in", "target_in", "control_out", "target_out",
                            "p_target_g", "p_target_i")}
    if not cfg.ideal:
        cols["frequency_flipped"] = []
    master = RngStream(cfg.seed, (4,))
    for control in (0, 1):
        for target in (AtomLevel.G, AtomLevel.I):
            rng = master.substream(2 * control + "gi".index(target.value))
            c_out, t_out = run_cnot(control, target, cfg, rng)
            out = apply_cnot(product_state(target, fock_state(control, cfg.n_max)),
                             cfg.cnot_phase, phi_b, Omega)
            probs = out.level_probabilities()
            cols["control_in"].append(control)
            cols["target_in"].append(target.value)
            cols["control_out"].append(c_out)
            cols["target_out"].append(t_out.value)
            cols["p_target_g"].append(probs[AtomLevel.G])
            cols["p_target_i"].append(probs[AtomLevel.I])
            if not cfg.ideal:
                flipped = 1.0 - probs[target]
                frac, _ = _sample_fraction(flipped, cfg.trajectories, rng)
                cols["frequency_flipped"].append(float(frac))
    cols = {k: np.array(v, dtype=object) if isinstance(v[0], str) else np.array(v)
            for k, v in cols.items()}
    return ResultTable(cols, _metadata(cfg, "cnot", phi_a=cfg.cnot_phase, phi_b=phi_b))


# ------------------------------------------------------------------- QND

def run_qnd(cfg: ExperimentConfig) -> ResultTable:
    """Thermal photon birth and death followed by repeated QND probes.

    Probe rows are emitted for the first ``cfg.record_trajectories``
    trajectories; ensemble statistics over all ``cfg.trajectories`` go into
    the metadata summary.
    """
    bath = cfg.bath
    probe = cfg.probe.idealized() if cfg.ideal else cfg.probe
    master = RngStream(cfg.seed)
    summary = run_ensemble(bath, probe, cfg.duration, cfg.trajectories, master)
    cols = {"trajectory": [], "probe_time": [], "outcome": [], "true_n": []}
    jumps = []
    for k in range(min(cfg.record_trajectories, cfg.trajectories)):
        rng = master.substream(k)
        n0 = steady_initial_n(bath, rng)
        rec = qnd_trajectory(bath, probe, cfg.duration, n0, rng)
        times = [t for t, _ in rec.probe_times]
        true_n = rec.photon_number(times) if times else []
        for (t, outcome), n in zip(rec.probe_times, true_n):
            cols["trajectory"].append(k)
            cols["probe_time"].append(t)
            cols["outcome"].append(outcome)
            cols["true_n"].append(int(n))
        jumps.append({"trajectory": k, "initial_n": n0, "events": rec.jump_times})
    cols = {
        "trajectory": np.array(cols["trajectory"], dtype=np.int64),
        "probe_time": np.array(cols["probe_time"], dtype=float),
        "outcome": np.array(cols["outcome"], dtype=object),
        "true_n": np.array(cols["true_n"], dtype=np.int64),
    }
    s = summary
    stats = {
        "occupancy": s.occupancy,
        "occupancy_stderr": s.occupancy_stderr,
        "expected_occupancy": bath.p1,
        "dwell_time": s.dwell_time,
        "dwell_time_stderr": s.dwell_time_stderr,
        "expected_dwell_time": 1.0 / bath.death_rate,
        "deaths": s.deaths,
        "mismatch_rate_n0": s.mismatches_at_0 / s.probes_at_0 if s.probes_at_0 else math.nan,
        "mismatch_rate_n1": s.mismatches_at_1 / s.probes_at_1 if s.probes_at_1 else math.nan,
        "probes_n0": s.probes_at_0,
        "probes_n1": s.probes_at_1,
    }
    meta = _metadata(cfg, "qnd", summary=stats, jumps=jumps, nbar=bath.nbar,
                     r2_phase=probe.r2_phase, rng=RngStream.GENERATOR)
    return ResultTable(cols, meta)


def jumps_table(table: ResultTable) -> ResultTable:
    """Flatten the jump events recorded by :func:`run_qnd`."""
    traj, times, events = [], [], []
    for entry in table.metadata.get("jumps", []):
        for t, ev in entry["events"]:
            traj.append(entry["trajectory"])
            times.append(t)
            events.append(ev)
    return ResultTable({"trajectory": np.array(traj, dtype=np.int64),
                        "time": np.array(times, dtype=float),
                        "event": np.array(events, dtype=object)})


EXPERIMENTS = {
    "rabi": run_rabi_scan,
    "splitting": run_mode_splitting,
    "ramsey": run_ramsey_fringes,
    "phase-gate": run_phase_gate_fringes,
    "field-phase": run_field_phase_experiment,
    "cnot": cnot_truth_table,
    "qnd": run_qnd,
}
