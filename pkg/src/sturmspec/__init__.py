"""Numerical spectral toolkit for -y'' + q(x) y = mu y on an interval.

Core capabilities: eigenvalues under Dirichlet, Neumann, mixed, periodic and
anti-periodic boundary conditions; an independent finite-difference oracle;
the transformation-operator kernel and its solution representations; and
executable experiments tying symmetry properties of the potential to
coincidence and multiplicity structure of the spectra.
"""

__version__ = "0.1.0"

from .errors import InputError, NumericsError
from .goursat import (
    GoursatKernel,
    ShiftedKernelView,
    reconstruct_solutions,
    shifted_kernel_view,
    solve_kernel,
)
from .potential import (
    ConditionReport,
    Potential,
    SymmetryDecomposition,
    build_coincidence_potential,
    check_coincidence_condition,
    check_half_coincidence_condition,
    check_symmetry,
    decompose,
    from_callable,
    make_potential,
    restrict,
)
from .shooting import (
    EndpointData,
    FundamentalTrajectory,
    MidpointSolutions,
    endpoint_data,
    endpoint_scan,
    integrate_fundamental,
    midpoint_solutions,
    wronskian_residual,
)
from .spectra import (
    BC_KINDS,
    EigenEntry,
    EigenvalueList,
    PeriodicClassification,
    char_value,
    classify_periodic_roots,
    eigenvalues,
    fd_oracle_eigenvalues,
    hill_discriminant,
    multiplicity,
)
from .verify import (
    SpectraComparison,
    TheoremReport,
    compare_spectra,
    verify_antiperiodic_double_structure,
    verify_constant_shift,
    verify_dirichlet_neumann_coincidence,
    verify_identities,
    verify_identity_suite,
    verify_mixed_coincidence,
    verify_periodic_double_structure,
)

__all__ = [
    "__version__",
    "InputError",
    "NumericsError",
    "Potential",
    "ConditionReport",
    "SymmetryDecomposition",
    "make_potential",
    "from_callable",
    "decompose",
    "check_symmetry",
    "check_coincidence_condition",
    "check_half_coincidence_condition",
    "build_coincidence_potential",
    "restrict",
    "FundamentalTrajectory",
    "EndpointData",
    "MidpointSolutions",
    "integrate_fundamental",
    "endpoint_data",
    "endpoint_scan",
    "midpoint_solutions",
    "wronskian_residual",
    "BC_KINDS",
    "EigenEntry",
    "EigenvalueList",
    "PeriodicClassification",
    "char_value",
    "hill_discriminant",
    "eigenvalues",
    "multiplicity",
    "classify_periodic_roots",
    "fd_oracle_eigenvalues",
    "GoursatKernel",
    "ShiftedKernelView",
    "solve_kernel",
    "reconstruct_solutions",
    "shifted_kernel_view",
    "SpectraComparison",
    "TheoremReport",
    "compare_spectra",
    "verify_mixed_coincidence",
    "verify_dirichlet_neumann_coincidence",
    "verify_periodic_double_structure",
    "verify_antiperiodic_double_structure",
    "verify_constant_shift",
    "verify_identities",
    "verify_identity_suite",
]
