"""Exact graded dimension tables over prime fields.

Tor, Ext and Hochschild homology of finite-dimensional GF(p)-algebras,
stable multiplier series, and symmetric-group coinvariant pipelines for
tensor and Schur constructions, with a deterministic report CLI.
"""

from fhcalc.errors import ComputationGuardError, JobValidationError
from fhcalc.fdalg import FDAlgebra, FDModule, ext, hochschild, resolve, tor
from fhcalc.functor_calc import (
    TorTableGrid,
    gl_homology,
    grid_from_additive,
    schur_apply,
    schur_of_stable_tor,
    stable_ext,
    stable_tor,
    tensor_tor,
    tor_table_grid,
)
from fhcalc.gf_linalg import PrimeField, kronecker, nullspace_basis, rank
from fhcalc.graded import (
    ExtAlgebra,
    ExtMonomial,
    GradedSpace,
    even_ones,
    ext_algebra,
    space,
    tensor,
)
from fhcalc.jobs import JobSpec, Report, load_job, parse_job, render, run_job
from fhcalc.symgrp import (
    GroupRepresentation,
    composition,
    coinvariants,
    koszul_sign,
    sign_representation,
    standard_representation,
    trivial_representation,
)

__version__ = "0.1.0"

__all__ = [
    "ComputationGuardError",
    "JobValidationError",
    "PrimeField",
    "rank",
    "nullspace_basis",
    "kronecker",
    "GradedSpace",
    "space",
    "tensor",
    "even_ones",
    "ExtMonomial",
    "ExtAlgebra",
    "ext_algebra",
    "GroupRepresentation",
    "composition",
    "coinvariants",
    "koszul_sign",
    "trivial_representation",
    "sign_representation",
    "standard_representation",
    "FDAlgebra",
    "FDModule",
    "resolve",
    "tor",
    "ext",
    "hochschild",
    "TorTableGrid",
    "tor_table_grid",
    "grid_from_additive",
    "stable_tor",
    "stable_ext",
    "gl_homology",
    "tensor_tor",
    "schur_apply",
    "schur_of_stable_tor",
    "JobSpec",
    "Report",
    "load_job",
    "parse_job",
    "run_job",
    "render",
    "__version__",
]
