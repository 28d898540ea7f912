"""Krylov-subspace quantum Fisher information.

Thin Python layer over the C++ core: density-matrix-weighted operator
space, Lanczos/Krylov QFI lower bounds, spectral-measure analysis, and
synthetic convergence-regime studies.
"""

from ._core import (
    DensityMatrix,
    QfiError,
    WeightedSpace,
    analyze,
    build_weighted_space,
    classify_measure,
    coefficient_tail,
    exact_qfi,
    exact_sld,
    fit_decay,
    gauss_quadrature,
    ising_hamiltonian,
    make_gapped_measure,
    make_hard_edge_measure,
    qfi_by_quadrature,
    random_density_matrix,
    spectral_measure,
    stieltjes_lanczos,
    validate_density_matrix,
    __version__,
)

__all__ = [
    "DensityMatrix",
    "QfiError",
    "WeightedSpace",
    "analyze",
    "build_weighted_space",
    "classify_measure",
    "coefficient_tail",
    "exact_qfi",
    "exact_sld",
    "fit_decay",
    "gauss_quadrature",
    "ising_hamiltonian",
    "make_gapped_measure",
    "make_hard_edge_measure",
    "qfi_by_quadrature",
    "random_density_matrix",
    "spectral_measure",
    "stieltjes_lanczos",
    "validate_density_matrix",
    "__version__",
]
