"""Thermal quantum discord of three-qubit Heisenberg rings with an impurity."""

from ._accel import USE_NUMBA
from .discord import (
    Bipartition,
    DiscordResult,
    MeasurementAngles,
    classical_correlation,
    conditional_entropy_measured,
    discord,
    entropy,
    mutual_information,
    partial_trace,
    xstate_discord,
)
from .matcore import EigenDecomposition, NotHermitian, eigh, kron, matfunc_hermitian
from .spinmodel import (
    DensityMatrix,
    MagneticImpurityParams,
    SpinImpurityParams,
    analytic_spectrum,
    build_magnetic_impurity,
    build_spin_impurity,
    gibbs_state,
    thermal_state,
)
from .sweep import (
    Branch,
    CriticalFit,
    SweepSpec,
    find_critical_coupling,
    fit_critical_line,
    run_sweep,
    zero_temperature_discord,
)

__version__ = "0.1.0"
