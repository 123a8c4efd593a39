"""Exact Hecke-algebra engine for simple-supercuspidal Bernstein components of Sp(4).

Brute-force verification at small p: affine geometry of C2, an explicit
matrix model of Sp(4, Q) inside Sp(4, Q_p), Moy-Prasad style filtration
subgroups with their characters, and Hecke algebras built from enumerated
double cosets.
"""

from .affine import C2, CASES, GL2, AffineRoot, AffineWeylElement, SL2xGL1
from .chevalley import GroupElement, h_of, n_of, x_affine, x_root
from .filtration import (
    Character,
    FiltrationGroup,
    build_filtration,
    build_strong_K,
    coordinates,
    eval_character,
    k_plus,
    k_plus_plus,
    make_character,
)
from .hecke import (
    AbstractHeckeElement,
    CosetTable,
    HeckeAlgebra,
    HeckeElement,
    Inconclusive,
    ResourceBoundExceeded,
    abstract_multiply,
    convolve,
    gauss_sum,
    iso_check,
    left_coset_table,
    product_coset_classes,
    structure_constants,
    supports,
)

__all__ = [
    "C2", "CASES", "GL2", "SL2xGL1", "AffineRoot", "AffineWeylElement",
    "GroupElement", "h_of", "n_of", "x_affine", "x_root",
    "Character", "FiltrationGroup", "build_filtration", "build_strong_K", "coordinates",
    "eval_character", "k_plus", "k_plus_plus", "make_character",
    "AbstractHeckeElement", "CosetTable", "HeckeAlgebra", "HeckeElement", "Inconclusive",
    "ResourceBoundExceeded", "abstract_multiply", "convolve", "gauss_sum", "iso_check",
    "left_coset_table", "product_coset_classes", "structure_constants", "supports",
]

__version__ = "0.1.0"
