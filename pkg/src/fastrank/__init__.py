"""Randomized exact rank computation over a prime field, with applications."""

from .conn import ConnConfig, ConnectivityState
from .dynrank import DynamicRank, DynRankConfig
from .errors import (DimensionError, FastRankError, NotInvertibleError, ParseError, SingularMatrixError,
                     VerificationError)
from .ff import DEFAULT_FIELD, MERSENNE61, PrimeField, as_rng, substream
from .magical import CompressionOperator, MagicalGraph, compress_cols, compress_rows, gen_magical
from .matching import Graph, find_matching, matching_size, subset_matching_size
from .matrix import SparseMatrix, gauss_rank, inverse, rank_normal_form
from .matroid import disjoint_bases, max_disjoint_bases
from .rank import (indep_cols, indep_rows, lowrank_mul, nullspace_basis, rank, rank_atmost,
                   rank_one_decompose)
from .superc import sc_compress, sc_rank, trivial_superconcentrator

__version__ = "0.1.0"

__all__ = [
    "ConnConfig", "ConnectivityState", "DynamicRank", "DynRankConfig", "DimensionError", "FastRankError",
    "NotInvertibleError", "ParseError", "SingularMatrixError", "VerificationError", "DEFAULT_FIELD",
    "MERSENNE61", "PrimeField", "as_rng", "substream", "CompressionOperator", "MagicalGraph",
    "compress_cols", "compress_rows", "gen_magical", "Graph", "find_matching", "matching_size",
    "subset_matching_size", "SparseMatrix", "gauss_rank", "inverse", "rank_normal_form", "disjoint_bases",
    "max_disjoint_bases", "indep_cols", "indep_rows", "lowrank_mul", "nullspace_basis", "rank",
    "rank_atmost", "rank_one_decompose", "sc_compress", "sc_rank", "trivial_superconcentrator",
]
