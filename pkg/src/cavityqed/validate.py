"""Fast self-check of the invariants every module promises.

Used by the ``validate`` CLI subcommand; each check returns ``(ok, detail)``.
Statistical checks use modest ensembles and fixed seeds so the run is quick
and reproducible.
"""
from __future__ import annotations

import math

import numpy as np

from .decoherence import (BathParams, ProbeConfig, damped_rabi_probability, ideal_probe_response,
                          nbar_from_p1, qnd_trajectory, run_ensemble)
from .dynamics import CavityParams, evolve_resonant, excited_probability, jc_splitting, rabi_probability
from .experiments import (ExperimentConfig, cnot_truth_table, run_mode_splitting,
                          run_phase_gate_fringes, inject_coherent)
from .hilbert import (AtomLevel, JointState, RngStream, coherent_amplitudes, coherent_field, fidelity,
                      make_basis_state, measure_atom, product_state, superpose)
from .pulses import (cavity_pulse, conditional_phase_gate, dispersive_interaction, ramsey_pulse)

OMEGA = 1.0


def _random_state(rng: np.random.Generator, n_max: int, top_free: bool = True):
    amps = rng.normal(size=3 * (n_max + 1)) + 1j * rng.normal(size=3 * (n_max + 1))
    if top_free:
        amps[n_max] = 0.0   # |e, n_max>
    return JointState(amps / np.linalg.norm(amps), n_max)


def check_norm_preservation():
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(50):
        s = _random_state(rng, 6)
        for op in (lambda x: evolve_resonant(x, OMEGA, rng.uniform(0, 20)),
                   lambda x: ramsey_pulse(x, "eg", rng.uniform(0, 7)),
                   lambda x: ramsey_pulse(x, "gi", rng.uniform(0, 7)),
                   lambda x: dispersive_interaction(x, rng.uniform(-3, 3))):
            worst = max(worst, abs(op(s).norm() - 1.0))
    return worst < 1e-12, f"max norm deviation {worst:.2e}"


def check_composition():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(50):
        s = _random_state(rng, 6)
        t1, t2 = rng.uniform(0, 10, 2)
        a = evolve_resonant(s, OMEGA, t1 + t2).amplitudes
        b = evolve_resonant(evolve_resonant(s, OMEGA, t1), OMEGA, t2).amplitudes
        worst = max(worst, float(np.max(np.abs(a - b))))
    return worst < 1e-12, f"max componentwise deviation {worst:.2e}"


def check_rabi_closed_form():
    t = np.linspace(0, 10 * math.pi, 1000)
    s = make_basis_state(AtomLevel.E, 0, 5)
    p = np.array([excited_probability(evolve_resonant(s, OMEGA, ti)) for ti in t])
    err = float(np.max(np.abs(p - rabi_probability(OMEGA, t))))
    return err < 1e-12, f"max |P_e - (1+cos)/2| = {err:.2e}"


def check_ladder_revivals():
    worst = 0.0
    for n in range(6):
        s = make_basis_state(AtomLevel.E, n, 8)
        t_rev = 2 * math.pi / (OMEGA * math.sqrt(n + 1))
        out = evolve_resonant(s, OMEGA, t_rev)
        worst = max(worst, abs(out.amp(AtomLevel.E, n) + 1.0))
        worst = max(worst, abs(2 * math.sqrt(n + 1) * 0.5 - jc_splitting(n + 1, 0.5)))
    return worst < 1e-10, f"max revival deviation {worst:.2e}"


def check_pulse_algebra():
    n_max = 3
    e0, g1, g0 = (make_basis_state(l, n, n_max) for l, n in ((AtomLevel.E, 0), (AtomLevel.G, 1), (AtomLevel.G, 0)))
    errs = [
        np.abs(cavity_pulse(e0, math.pi / 2, OMEGA).amplitudes - superpose([(e0, 1), (g1, 1)]).amplitudes).max(),
        np.abs(cavity_pulse(e0, 2 * math.pi, OMEGA).amplitudes + e0.amplitudes).max(),
        np.abs(cavity_pulse(g1, 2 * math.pi, OMEGA).amplitudes + g1.amplitudes).max(),
        np.abs(cavity_pulse(g0, 1.234, OMEGA).amplitudes - g0.amplitudes).max(),
    ]
    worst = float(max(errs))
    return worst < 1e-12, f"max deviation {worst:.2e}"


def check_ramsey_inverse():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(20):
        s = _random_state(rng, 3)
        phi = rng.uniform(0, 2 * math.pi)
        back = ramsey_pulse(ramsey_pulse(s, "eg", phi), "eg", phi + math.pi)
        worst = max(worst, 1.0 - fidelity(s, back))
    return worst < 1e-12, f"max infidelity {worst:.2e}"


def check_dispersive_coherent():
    eps = 0.37
    worst = 0.0
    for alpha in (0.3, 0.7 + 0.2j, 1.0):
        fld = coherent_field(alpha, 15)
        out = dispersive_interaction(product_state(AtomLevel.G, fld), eps)
        want = product_state(AtomLevel.G, coherent_field(alpha * np.exp(-1j * eps), 15))
        worst = max(worst, 1 - fidelity(out, want))
        out = dispersive_interaction(product_state(AtomLevel.E, fld), eps)
        want_amps = np.exp(1j * eps) * product_state(AtomLevel.E, coherent_field(alpha * np.exp(1j * eps), 15)).amplitudes
        worst = max(worst, float(np.max(np.abs(out.amplitudes - want_amps))))
    return worst < 1e-9, f"max deviation {worst:.2e}"


def check_gate_equivalence():
    worst = 0.0
    for level in (AtomLevel.G, AtomLevel.I):
        for n in (0, 1):
            s = make_basis_state(level, n, 3)
            a = conditional_phase_gate(s, math.pi).amplitudes
            b = cavity_pulse(s, 2 * math.pi, OMEGA).amplitudes
            worst = max(worst, float(np.max(np.abs(a - b))))
    return worst < 1e-12, f"max deviation {worst:.2e}"


def check_cnot():
    table = cnot_truth_table(ExperimentConfig(ideal=True, cavity=CavityParams(g0=0.5)))
    want = [(0, "g", 0, "g"), (0, "i", 0, "i"), (1, "g", 1, "i"), (1, "i", 1, "g")]
    got = list(zip(table["control_in"], table["target_in"], table["control_out"], table["target_out"]))
    got = [(int(a), str(b), int(c), str(d)) for a, b, c, d in got]
    return got == want, f"rows {got}"


def check_phase_gate_shift():
    table = run_phase_gate_fringes(ExperimentConfig(ideal=True))
    shift = table.metadata["shift"]
    return abs(shift - math.pi) < 1e-6, f"fitted shift {shift:.12f}"


def check_mode_splitting():
    table = run_mode_splitting(ExperimentConfig(ideal=True))
    m = table.metadata
    ok = (abs(m["separation"] - m["expected_separation"]) <= m["grid_step"]
          and m["empty_peak"] == ExperimentConfig().cavity.omega)
    return ok, f"separation {m['separation']:.6g} vs {m['expected_separation']:.6g}"


def check_probe_truth_table():
    p0, p1 = ideal_probe_response(ProbeConfig())
    return p0 < 1e-12 and p1 > 1 - 1e-12, f"P(e|0)={p0:.2e}, P(e|1)={p1:.12f}"


def check_trajectory_determinism():
    bath = BathParams(kappa=1 / 0.13, p1=0.05)
    probe = ProbeConfig()
    a = qnd_trajectory(bath, probe, 2.0, 1, RngStream(42, (7,)))
    b = qnd_trajectory(bath, probe, 2.0, 1, RngStream(42, (7,)))
    return a == b, f"{len(a.jump_times)} jumps, {len(a.probe_times)} probes"


def check_qnd_statistics():
    bath = BathParams(kappa=1 / 0.13, p1=0.05)
    s = run_ensemble(bath, ProbeConfig(), 2.0, 5000, RngStream(11), with_probes=False)
    z = abs(s.occupancy - bath.p1) / s.occupancy_stderr
    return z < 3, f"occupancy {s.occupancy:.5f} +- {s.occupancy_stderr:.5f} (z={z:.2f})"


def check_born_rule():
    s = superpose([(make_basis_state(AtomLevel.E, 0, 1), math.sqrt(0.25)),
                   (make_basis_state(AtomLevel.G, 0, 1), math.sqrt(0.75))])
    rng = RngStream(5)
    n = 20000
    hits = sum(measure_atom(s, rng)[0] is AtomLevel.E for _ in range(n))
    sigma = math.sqrt(0.25 * 0.75 / n)
    z = abs(hits / n - 0.25) / sigma
    return z < 3, f"freq {hits / n:.4f} (z={z:.2f})"


def check_coherent_recurrence():
    alpha = 0.8 - 0.3j
    c = coherent_amplitudes(alpha, 20)
    rel = np.abs(c[1:] - c[:-1] * alpha / np.sqrt(np.arange(1, 21))) / np.abs(c[1:])
    return float(rel.max()) < 1e-13, f"max relative deviation {rel.max():.2e}"


def check_damped_envelope():
    Omega, T2 = 2.0, 7.0
    t = 2 * math.pi * np.arange(20) / Omega
    env = 0.5 + 0.5 * np.exp(-t / T2)
    err = float(np.max(np.abs(damped_rabi_probability(t, Omega, T2) - env)))
    grid = np.linspace(0, 30, 1000)
    lim = float(np.max(np.abs(damped_rabi_probability(grid, Omega, 1e18) - rabi_probability(Omega, grid))))
    return err < 1e-9 and lim < 1e-12, f"envelope {err:.2e}, T2->inf {lim:.2e}"


def check_displacement():
    vac = coherent_field(0, 15)
    out = inject_coherent(vac, 0.6 + 0.2j)
    f = fidelity(out, coherent_field(0.6 + 0.2j, 15))
    return f > 1 - 1e-9, f"fidelity {f:.12f}"


def check_nbar():
    ok = abs(nbar_from_p1(0.25) - 0.5) < 1e-15 and abs(nbar_from_p1(0.05) - 0.05 / 0.9) < 1e-15
    return ok, f"nbar(0.05)={nbar_from_p1(0.05):.6f}"


CHECKS = {
    "norm preservation": check_norm_preservation,
    "evolution composition": check_composition,
    "vacuum Rabi closed form": check_rabi_closed_form,
    "ladder revivals": check_ladder_revivals,
    "cavity pulse algebra": check_pulse_algebra,
    "Ramsey inverse": check_ramsey_inverse,
    "dispersive coherent shift": check_dispersive_coherent,
    "phase gate equivalence": check_gate_equivalence,
    "CNOT truth table": check_cnot,
    "phase-gate fringe shift": check_phase_gate_shift,
    "mode splitting": check_mode_splitting,
    "QND probe truth table": check_probe_truth_table,
    "trajectory determinism": check_trajectory_determinism,
    "QND occupancy": check_qnd_statistics,
    "Born rule sampling": check_born_rule,
    "coherent recurrence": check_coherent_recurrence,
    "damped Rabi envelope": check_damped_envelope,
    "coherent injection": check_displacement,
    "thermal occupation": check_nbar,
}


def run_all() -> list:
    results = []
    for name, fn in CHECKS.items():
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed run
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
