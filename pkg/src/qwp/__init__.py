"""Exact q-deformed Weil-Petersson volume polynomials and verification tools.

The package computes volume polynomials of bordered surfaces by
topological recursion in four flavors (q-deformed and classical, plain
and super), entirely in exact rational arithmetic over small polynomial
rings, and ships the machinery to verify the construction: q-series
identities with rigorous truncation budgets, an independent series
oracle for the kernel moment polynomials, and a numeric check that the
deformed kernels approach their classical limits.
"""

__version__ = "0.1.0"

from .kernels import Flavor, UniPoly, b_stream, d_integral, f_poly, r_integral, schur_s
from .qseries import (
    IdentityReport,
    OracleComparison,
    PrecisionError,
    TrendReport,
    TruncSpec,
    f_oracle,
    kernel_limit_trend,
    oracle_compare,
    verify_qident,
    verify_qident_odd,
    verify_to_budget,
)
from .rings import (
    INHOMOGENEOUS,
    FamilyError,
    GenFamily,
    RingElem,
    bernoulli,
    qzeta_odd_trunc,
    qzeta_trunc,
    rat_parse,
    rat_str,
    zeta_even,
    zeta_odd_even,
)
from .supervolumes import SuperSeries, super_limit, super_volume, super_weight
from .volumes import (
    InexactDivisionError,
    UnstableInputError,
    VolumePoly,
    classical_limit,
    classical_weight,
    volume,
)

__all__ = [
    "__version__",
    "Flavor",
    "UniPoly",
    "b_stream",
    "d_integral",
    "f_poly",
    "r_integral",
    "schur_s",
    "IdentityReport",
    "OracleComparison",
    "PrecisionError",
    "TrendReport",
    "TruncSpec",
    "f_oracle",
    "kernel_limit_trend",
    "oracle_compare",
    "verify_qident",
    "verify_qident_odd",
    "verify_to_budget",
    "INHOMOGENEOUS",
    "FamilyError",
    "GenFamily",
    "RingElem",
    "bernoulli",
    "qzeta_odd_trunc",
    "qzeta_trunc",
    "rat_parse",
    "rat_str",
    "zeta_even",
    "zeta_odd_even",
    "SuperSeries",
    "super_limit",
    "super_volume",
    "super_weight",
    "InexactDivisionError",
    "UnstableInputError",
    "VolumePoly",
    "classical_limit",
    "classical_weight",
    "volume",
]
