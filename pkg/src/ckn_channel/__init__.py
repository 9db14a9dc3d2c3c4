"""Compton-Klein-Nishina scattering of 511 keV photons as a quantum error channel."""

from .bipartite import (
    PairGeometry,
    double_scatter_probability,
    loss_probability,
    naive_sequential_probability,
    pair_channel_output,
    pair_effect,
    probability_envelope,
    second_scatter_probability,
)
from .channel import (
    CanonicalK3Coefficients,
    KrausSet,
    ScatteringGeometry,
    apply_channel,
    error_probabilities,
    extremal_pure_probabilities,
    k1_scalar,
    k3_coefficients,
    kraus_k1,
    kraus_k2,
    kraus_k3_canonical,
    kraus_k3_general,
    kraus_set,
    mix_kraus_set,
    scatter_effect,
    single_scatter_probability,
)
from .entanglement import ConcurrenceResult, concurrence, entanglement_breaking_scan
from .klein_nishina import klein_nishina_oracle
from .linalg import (
    RngStream,
    haar_unitary,
    herm_eigen,
    partial_trace_b,
    psd_sqrt,
    random_pure_state,
    tensor,
)
from .records import ExperimentRecord
from .states import PSI_MINUS, PSI_PLUS, RHO_MIXED, UNPOLARIZED, H, V

__version__ = "0.1.0"
