# Copyright 2026 The slatertt Authors
# SPDX-License-Identifier: Apache-2.0
"""Occupation tensors of Slater determinants, cut spectra and orbital orderings."""

from ._core import (
    CapacityError,
    ConsistencyError,
    DegeneracyError,
    Error,
    ParseError,
    ValidationError,
    __version__,
    anneal_prefactor_order,
    apply_permutation,
    best_prefactor_order,
    cut_spectrum,
    fiedler_order,
    inversion_residual,
    mutual_information,
    prefactor,
    random_isometry,
    run_experiment,
    selftest,
    slater_coefficients,
    two_orbital_rdm,
)

__all__ = [
    "CapacityError",
    "ConsistencyError",
    "DegeneracyError",
    "Error",
    "ParseError",
    "ValidationError",
    "__version__",
    "anneal_prefactor_order",
    "apply_permutation",
    "best_prefactor_order",
    "cut_spectrum",
    "fiedler_order",
    "inversion_residual",
    "mutual_information",
    "prefactor",
    "random_isometry",
    "run_experiment",
    "selftest",
    "slater_coefficients",
    "two_orbital_rdm",
]
