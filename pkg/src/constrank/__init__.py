"""Linear spaces of matrices of constant rank: exact certificates, splitting
types of the image bundle, Chern-class obstructions and bounds for l(r;a)."""

from .exactmath import MultiPoly, PrimeField, UPoly, poly_det, poly_rank, upoly_gcd
from .chern import ChernPoly, chern_of_twisted_tangent, kernel_chern
from .pencil import (
    ExhaustivePrimes,
    MatrixSpace,
    RandomRational,
    RankCertificate,
    SplittingType,
    SymbolicCharts,
    line_splitting_type,
    load_space,
    rank_at,
    save_space,
    transpose_dual,
    verify_constant_rank,
)
from .constructions import banded, embedded, skew3, westwick5
from .bounds import BoundRecord, bound, explain, table
from .search import SearchSpec, max_dim_over_Fp

__version__ = "0.1.0"
