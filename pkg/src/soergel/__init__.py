"""Exact Kazhdan-Lusztig combinatorics and Soergel-calculus checks.

Layers, bottom to top: exact scalars over real cyclotomic subfields
(`scalars`), dense exact linear algebra (`exactlin`), Laurent
polynomials in v (`laurent`), Coxeter systems (`coxeter`), the Hecke
algebra with its canonical basis (`hecke`), cells and the asymptotic
ring (`cells`), polynomial realizations and divided differences
(`realization`), Bott-Samelson bimodules with intersection forms
(`bimodule`), certified modular linear algebra (`modsolve`),
indecomposable summands (`tower`), product decompositions with
Lefschetz/signature verdicts (`hodge`), and a CLI (`cli`).
"""

from .coxeter import (
    INF,
    CapExceeded,
    CoxElt,
    CoxeterMatrix,
    CoxeterSystem,
    format_word,
    make_system,
    parse_word,
    preset,
)
from .hodge import (
    ConservationReport,
    Decomposer,
    LefschetzReport,
    ProductSpan,
    SignatureReport,
    block_signature_check,
)
from .laurent import Laurent, is_unimodal, quantum, quantum_decompose
from .realization import Realization
from .scalars import Rat, ScalarField
from .tower import Tower

__version__ = "0.1.0"

__all__ = [
    "INF",
    "CapExceeded",
    "ConservationReport",
    "CoxElt",
    "CoxeterMatrix",
    "CoxeterSystem",
    "Decomposer",
    "Laurent",
    "LefschetzReport",
    "ProductSpan",
    "Rat",
    "Realization",
    "ScalarField",
    "SignatureReport",
    "Tower",
    "block_signature_check",
    "format_word",
    "is_unimodal",
    "make_system",
    "parse_word",
    "preset",
    "quantum",
    "quantum_decompose",
    "__version__",
]
