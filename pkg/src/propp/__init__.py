"""Exact tools for skew forms over Z/p^k and one-relator pro-p presentations.

Everything is integer-exact: canonical residues, unit-pivot elimination,
arbitrary-precision expansion coefficients.  The package exposes

* ``localring``  - arithmetic in Z/p^k and dense exact matrices,
* ``symplectic`` - symplectic bases, isotropic completion, lifting, the
  congruence normal form of invertible skew matrices,
* ``magnus``     - free-group words, degree-<=2 truncated expansion, relator
  pairing analysis,
* ``demushkin``  - rank formulas, relator normalization, retraction
  witnesses,
* ``howson``     - closed-form intersection rank bounds and the audited
  inequality chain,
* ``oracle``     - independent brute-force verifiers and seeded samplers,
* ``cli``        - the ``propp`` command with JSON input/output.
"""

from .localring import LocalRingSpec, MatrixR, binom2
from .magnus import FreeWord, MagnusData, RelatorAnalysis, analyze, demushkin_relator, expand
from .symplectic import (
    GramForm,
    Subspace,
    SymplecticBasis,
    check_symplectic,
    complete_isotropic,
    is_nondegenerate,
    lift_basis,
    skew_normal_form,
    symplectic_basis_field,
)
from .demushkin import (
    DemushkinInvariants,
    NormalizationResult,
    RetractionWitness,
    distinguished_functional,
    normalize_relator,
    retraction_witness,
    solvable_guard,
    subgroup_rank,
)
from .howson import HowsonReport, bound, chain_depth, hanna_neumann_bound, open_case_bound, schreier_bound, trace

__version__ = "0.1.0"

__all__ = [
    "LocalRingSpec", "MatrixR", "binom2",
    "FreeWord", "MagnusData", "RelatorAnalysis", "analyze", "demushkin_relator", "expand",
    "GramForm", "Subspace", "SymplecticBasis", "check_symplectic",
    "complete_isotropic", "is_nondegenerate", "lift_basis",
    "skew_normal_form", "symplectic_basis_field",
    "DemushkinInvariants", "NormalizationResult", "RetractionWitness",
    "distinguished_functional", "normalize_relator", "retraction_witness",
    "solvable_guard", "subgroup_rank",
    "HowsonReport", "bound", "chain_depth", "hanna_neumann_bound",
    "open_case_bound", "schreier_bound", "trace",
    "__version__",
]
