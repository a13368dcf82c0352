"""Exact symbolic kernel for Cartan commutants of sl(n), the A3 polynomial algebra and R(n)."""

from .commutant import GeneratorSet, express_in_generators, extract_generators, find_relations
from .envalg import NCPoly, nc_commutator, sym_product, symmetrize
from .liealg import LieAlgebraSpec, algebra_by_name, check_jacobi, make_gl, make_sl
from .report import RelationReport
from .symalg import CommPoly, ConstraintIdeal, Ring, berezin_bracket, canonical_bracket

__version__ = "0.1.0"

__all__ = [
    "CommPoly", "ConstraintIdeal", "GeneratorSet", "LieAlgebraSpec", "NCPoly", "RelationReport", "Ring",
    "algebra_by_name", "berezin_bracket", "canonical_bracket", "check_jacobi", "express_in_generators",
    "extract_generators", "find_relations", "make_gl", "make_sl", "nc_commutator", "sym_product", "symmetrize",
]
