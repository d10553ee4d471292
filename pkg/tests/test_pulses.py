import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cavityqed.dynamics import CavityParams
from cavityqed.errors import SubspaceError
from cavityqed.hilbert import (JointState, atom_superposition, coherent_field, fidelity, field_state,
                               fock_state, make_basis_state, product_state, superpose)
from cavityqed.pulses import (DispersiveParams, PulseSpec, cavity_pulse, conditional_phase_gate,
                              detuning_for_epsilon, dispersive_epsilon, dispersive_interaction,
                              light_shift, ramsey_matrix, ramsey_pulse)

S2 = 1 / math.sqrt(2)
OMEGA = 2.0


def ket(level, n, n_max=3):
    return make_basis_state(level, n, n_max)


def random_state(seed, n_max=3, free_top=True):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=3 * (n_max + 1)) + 1j * rng.normal(size=3 * (n_max + 1))
    if free_top:
        v[n_max] = 0
    return JointState(v / np.linalg.norm(v), n_max)


class TestRamsey:
    def test_e_to_superposition(self):
        out = ramsey_pulse(ket("e", 0), "eg", 0.0)
        assert out.amp("e", 0) == pytest.approx(S2) and out.amp("g", 0) == pytest.approx(S2)

    @pytest.mark.parametrize("phi", [0.0, 0.4, 2.0, -1.1])
    def test_g_with_phase(self, phi):
        out = ramsey_pulse(ket("g", 2), "eg", phi)
        assert out.amp("e", 2) == pytest.approx(-S2 * np.exp(-1j * phi), abs=1e-15)
        assert out.amp("g", 2) == pytest.approx(S2, abs=1e-15)

    def test_e_with_phase(self):
        out = ramsey_pulse(ket("e", 1), "eg", 0.8)
        assert out.amp("g", 1) == pytest.approx(S2 * np.exp(0.8j), abs=1e-15)

    @pytest.mark.parametrize("phi", [0.0, 1.0, 3.0])
    def test_i_untouched_by_eg(self, phi):
        s = ket("i", 1)
        assert np.array_equal(ramsey_pulse(s, "eg", phi).amplitudes, s.amplitudes)

    def test_two_zones_compose_to_pi(self):
        out = ramsey_pulse(ramsey_pulse(ket("e", 0), "eg", 0.0), "eg", 0.0)
        # 2x2 product of the zone map: [[1,-1],[1,1]]^2 / 2 = [[0,-1],[1,0]]
        assert out.amp("g", 0) == pytest.approx(1, abs=1e-15)
        assert abs(out.amp("e", 0)) < 1e-15

    def test_gi_transition_acts_on_g_and_i(self):
        out = ramsey_pulse(ket("g", 0), "gi", 0.0)
        assert out.amp("g", 0) == pytest.approx(S2) and out.amp("i", 0) == pytest.approx(S2)
        assert ramsey_pulse(ket("e", 0), "gi", 1.0).amp("e", 0) == 1

    def test_field_untouched(self):
        s = superpose([(ket("e", 0), 0.6), (ket("e", 2), 0.8)])
        out = ramsey_pulse(s, "eg", 0.3)
        assert np.allclose(out.photon_distribution(), s.photon_distribution(), atol=1e-15)

    @settings(max_examples=30)
    @given(seed=st.integers(0, 10 ** 6), phi=st.floats(-10, 10))
    def test_inverse_zone(self, seed, phi):
        s = random_state(seed)
        back = ramsey_pulse(ramsey_pulse(s, "eg", phi), "eg", phi + math.pi)
        assert fidelity(s, back) == pytest.approx(1, abs=1e-12)

    def test_unknown_transition(self):
        with pytest.raises(ValueError):
            ramsey_pulse(ket("e", 0), "ei", 0.0)

    def test_pulse_spec(self):
        spec = PulseSpec.ramsey("eg", detuning=2.0, delay=0.25)
        assert spec.phase == 0.5
        out = spec.apply(ket("g", 0))
        assert out.amp("e", 0) == pytest.approx(-S2 * np.exp(-0.5j))
        with pytest.raises(ValueError):
            PulseSpec("cavity_eg", math.pi, phase=0.1)
        with pytest.raises(ValueError):
            PulseSpec("ramsey_eg", -1.0)


class TestCavityPulses:
    @pytest.mark.parametrize("c_e,c_g", [(0.6, 0.8), (S2, 1j * S2), (1, 0)])
    def test_pi_pulse_maps_atom_onto_field(self, c_e, c_g):
        s = atom_superposition({"e": c_e, "g": c_g}, fock_state(0, 3))
        out = cavity_pulse(s, math.pi, OMEGA)
        want = product_state("g", field_state([c_g, c_e], 3))
        assert np.max(np.abs(out.amplitudes - want.amplitudes)) < 1e-12

    @pytest.mark.parametrize("c_1,c_0", [(0.6, 0.8), (S2, -1j * S2)])
    def test_pi_pulse_maps_field_onto_atom(self, c_1, c_0):
        s = product_state("g", field_state([c_0, c_1], 3))
        out = cavity_pulse(s, math.pi, OMEGA)
        want = atom_superposition({"e": -c_1, "g": c_0}, fock_state(0, 3))
        assert np.max(np.abs(out.amplitudes - want.amplitudes)) < 1e-12

    def test_half_pi_entangles(self):
        out = cavity_pulse(ket("e", 0), math.pi / 2, OMEGA)
        want = superpose([(ket("e", 0), 1), (ket("g", 1), 1)])
        assert np.max(np.abs(out.amplitudes - want.amplitudes)) < 1e-12

    @pytest.mark.parametrize("level,n", [("e", 0), ("g", 1)])
    def test_two_pi_global_sign(self, level, n):
        out = cavity_pulse(ket(level, n), 2 * math.pi, OMEGA)
        assert np.max(np.abs(out.amplitudes + ket(level, n).amplitudes)) < 1e-12

    def test_two_pi_ground_vacuum(self):
        s = ket("g", 0)
        assert np.array_equal(cavity_pulse(s, 2 * math.pi, OMEGA).amplitudes, s.amplitudes)


class TestDispersive:
    def test_ground_vacuum_exact(self):
        s = ket("g", 0)
        assert np.array_equal(dispersive_interaction(s, 0.7).amplitudes, s.amplitudes)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 0.3 + 0.6j])
    def test_g_atom_rotates_field_backwards(self, alpha):
        eps = 0.41
        out = dispersive_interaction(product_state("g", coherent_field(alpha, 15)), eps)
        want = product_state("g", coherent_field(alpha * np.exp(-1j * eps), 15))
        assert fidelity(out, want) >= 1 - 1e-9

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 0.3 + 0.6j])
    def test_e_atom_rotates_field_forwards_with_global_phase(self, alpha):
        eps = 0.41
        out = dispersive_interaction(product_state("e", coherent_field(alpha, 15)), eps)
        want = np.exp(1j * eps) * product_state("e", coherent_field(alpha * np.exp(1j * eps), 15)).amplitudes
        assert np.max(np.abs(out.amplitudes - want)) < 1e-12

    def test_e2_third_of_pi(self):
        out = dispersive_interaction(ket("e", 2), math.pi / 3)
        assert out.amp("e", 2) == pytest.approx(-1, abs=1e-15)

    def test_i_unchanged(self):
        s = ket("i", 3, 4)
        assert np.array_equal(dispersive_interaction(s, 1.3).amplitudes, s.amplitudes)

    @given(e1=st.floats(-5, 5), e2=st.floats(-5, 5), seed=st.integers(0, 1000))
    def test_additive(self, e1, e2, seed):
        s = random_state(seed, free_top=False)
        a = dispersive_interaction(dispersive_interaction(s, e1), e2).amplitudes
        b = dispersive_interaction(s, e1 + e2).amplitudes
        assert np.max(np.abs(a - b)) < 1e-12

    def test_two_g_passes_on_coherent_state(self):
        eps, alpha = 0.3, 0.9
        s = product_state("g", coherent_field(alpha, 15))
        out = dispersive_interaction(dispersive_interaction(s, eps), eps)
        want = product_state("g", coherent_field(alpha * np.exp(-2j * eps), 15))
        assert fidelity(out, want) >= 1 - 1e-9


class TestEpsilon:
    base = CavityParams(delta=2 * math.pi * 50e3)

    def test_inverse_in_detuning(self):
        p2 = CavityParams(delta=2 * self.base.delta)
        assert dispersive_epsilon(p2) == pytest.approx(dispersive_epsilon(self.base) / 2, rel=1e-14)

    def test_quadratic_in_dipole(self):
        p2 = CavityParams(delta=self.base.delta, d=2 * self.base.d)
        assert dispersive_epsilon(p2) == pytest.approx(4 * dispersive_epsilon(self.base), rel=1e-14)

    def test_round_trip_half_pi(self):
        delta = detuning_for_epsilon(math.pi / 2, self.base)
        p = CavityParams(delta=delta)
        assert dispersive_epsilon(p) == pytest.approx(math.pi / 2, rel=1e-13)

    def test_formula(self):
        from scipy.constants import epsilon_0, hbar
        p = self.base
        t_i = math.sqrt(math.pi) * p.w / p.v
        want = (1 / hbar) * t_i * (p.omega / p.delta) * p.d ** 2 / (2 * epsilon_0 * p.V)
        assert dispersive_epsilon(p) == pytest.approx(want, rel=1e-14)

    def test_resonant_divergence(self):
        with pytest.raises(ValueError):
            dispersive_epsilon(CavityParams(delta=0.0))


class TestLightShift:
    def test_uncoupled(self):
        p = DispersiveParams(epsilon=0.1, delta=4.0, t_i=1.0, omega_r=0.0)
        assert light_shift(2, p, 1, omega=10.0) == (32.0, 28.0)

    def test_photon_scaling(self):
        p = DispersiveParams(epsilon=0.1, delta=4.0, t_i=1.0, omega_r=2.0)
        up1, _ = light_shift(0, p, 1, omega=0.0)
        up2, _ = light_shift(1, p, 1, omega=0.0)
        assert (up2 - 2.0) == pytest.approx(2 * (up1 - 2.0))

    def test_sign_flip(self):
        p = DispersiveParams(epsilon=0.1, delta=4.0, t_i=1.0, omega_r=2.0)
        plus, _ = light_shift(1, p, 1, omega=0.0)
        minus, _ = light_shift(1, p, -1, omega=0.0)
        assert plus - 2.0 == pytest.approx(-(minus - 2.0))

    def test_zero_detuning(self):
        with pytest.raises(ValueError):
            DispersiveParams(epsilon=0.1, delta=0.0, t_i=1.0)


class TestPhaseGate:
    def test_atom_superposition_one_photon(self):
        s = atom_superposition({"g": 1, "i": 1}, fock_state(1, 3))
        out = conditional_phase_gate(s, math.pi)
        want = atom_superposition({"g": -1, "i": 1}, fock_state(1, 3))
        assert np.max(np.abs(out.amplitudes - want.amplitudes)) < 1e-15

    def test_field_superposition_g_atom(self):
        s = product_state("g", field_state([1, 1], 3))
        out = conditional_phase_gate(s, math.pi)
        want = product_state("g", field_state([1, -1], 3))
        assert np.max(np.abs(out.amplitudes - want.amplitudes)) < 1e-15

    @pytest.mark.parametrize("phi", [0.3, math.pi, 5.0])
    def test_i_atom_untouched(self, phi):
        s = ket("i", 1)
        assert np.array_equal(conditional_phase_gate(s, phi).amplitudes, s.amplitudes)

    def test_identity_at_zero(self):
        s = random_state(4, n_max=1)
        assert np.allclose(conditional_phase_gate(s, 0.0).amplitudes, s.amplitudes, atol=0)

    @pytest.mark.parametrize("level", ["g", "i"])
    @pytest.mark.parametrize("n", [0, 1])
    def test_equals_two_pi_crossing(self, level, n):
        s = ket(level, n)
        a = conditional_phase_gate(s, math.pi).amplitudes
        b = cavity_pulse(s, 2 * math.pi, OMEGA).amplitudes
        assert np.max(np.abs(a - b)) < 1e-12

    def test_rejects_two_photons(self):
        with pytest.raises(SubspaceError):
            conditional_phase_gate(ket("g", 2), math.pi)

    def test_unitary_on_basis(self):
        basis = [ket(l, n) for l in "egi" for n in (0, 1)]
        outs = np.array([conditional_phase_gate(b, 1.1).amplitudes for b in basis])
        assert np.allclose(outs.conj() @ outs.T, np.eye(len(basis)), atol=1e-12)


def test_ramsey_matrix_unitary():
    m = ramsey_matrix(0.77)
    assert np.allclose(m.conj().T @ m, np.eye(2), atol=1e-15)
