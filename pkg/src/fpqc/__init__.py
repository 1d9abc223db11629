"""Approximate private quantum channels on fermionic Gaussian systems.

Majorana monomial algebra, even Gaussian states, randomizing channels built
from Majorana unitaries, Schatten-norm distances, closed-form cardinality
bounds and a seeded Monte Carlo harness.
"""
from .bounds import (
    BoundQuery,
    concentration_tail,
    final_log_probability,
    mcdiarmid_tail,
    net_log_cardinality,
    proof_net_log_cardinality,
    prop1_threshold,
    prop2_threshold,
)
from .channels import (
    AttenuationChannel,
    MonomialExpansion,
    RandomUnitaryChannel,
    apply,
    apply_attenuation,
    choi_cp_check,
    expand,
    fpqc_full,
    fpqc_paper,
    fpqc_random_subset,
)
from .experiments import (
    ExperimentConfig,
    concentration_experiment,
    export,
    surrogate_net,
    sweep_cardinality,
)
from .gaussian import (
    FermionicGaussianState,
    NormalForm,
    covariance_of,
    entropy,
    gaussian_unitary,
    normal_form,
    random_gaussian_state,
    state_from_covariance,
    state_from_generator,
    state_from_spectrum,
)
from .majorana import (
    MajoranaMonomial,
    PauliString,
    fpqc_unitary,
    jordan_wigner,
    multiply,
    parity_operator,
    to_dense,
)
from .metrics import PqcVerdict, distance_to_mms, pqc_test, schatten_norm

__version__ = "0.1.0"
