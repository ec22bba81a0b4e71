"""Qubit thermalization under periodic non-selective measurement.

Modules:

* :mod:`zenotherm.qmath` - 2x2 complex algebra, density matrices, measurement basis
* :mod:`zenotherm.channel` - generalized amplitude damping semigroup
* :mod:`zenotherm.protocol` - density-matrix simulator and transition probabilities
* :mod:`zenotherm.analytic` - closed-form populations, limits and success probabilities
* :mod:`zenotherm.cli` - command-line front end
"""

from .analytic import (
    a_free,
    a_general,
    a_inf,
    a_zeno,
    bound_check,
    first_order,
    p_suc_first,
    p_suc_free,
    p_suc_general,
    p_suc_zeno,
    tau_eff,
)
from .channel import ChannelParams, apply, apply_closed_form, gamma, kraus_set
from .protocol import ProtocolConfig, run, transition_probs
from .qmath import ComputationalBasis, DensityMatrix, check_density, make_basis

__version__ = "0.1.0"
