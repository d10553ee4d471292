"""Numerical simulator for strong-coupling cavity QED with one atom and one mode."""

__version__ = "0.1.0"

from .errors import (CalibrationError, CavityQEDError, ConfigError, DegenerateSuperpositionError,
                     DimensionError, GridError, NumericalError, SubspaceError, TruncationError)
from .hilbert import (AtomLevel, CoherentField, FieldState, JointState, RngStream, coherent_field,
                      fidelity, make_basis_state, measure_atom, superpose)
from .dynamics import (CavityParams, dressed_energies, evolve_resonant, excited_probability,
                       interaction_time, jc_splitting, kappa_from_Q, vacuum_rabi_spectrum)
from .pulses import (cavity_pulse, conditional_phase_gate, dispersive_epsilon,
                     dispersive_interaction, light_shift, ramsey_pulse)
from .decoherence import (BathParams, ProbeConfig, TrajectoryRecord, damped_rabi_probability,
                          nbar_from_p1, probe_photon, qnd_trajectory)
