"""Exact-arithmetic toolkit for toric Landau-Ginzburg data.

Everything in this package computes over the integers or the rationals;
there is no floating point anywhere.  The subpackages split along the
objects they handle:

``intlinalg``
    integer matrices, Smith normal form, kernel lattices, section systems
``rationalcone``
    finitely generated cones over Q (membership, duality, equality)
``toricfan``
    fans, total-space fans of split bundles, nef cones two ways
``semigroups``
    lattice polytopes, affine semigroups, normality and Gorenstein shifts
``weylops``
    normal-ordered operators in lambda, d/dlambda, z and z^2 d/dz, and the
    builders for all the operator families (box, Euler, hat, star, qdm)
``cohomring``
    Stanley-Reisner cohomology rings of smooth complete toric varieties
``lgfamily``
    Laurent-polynomial families, Kaehler-moduli restriction, Jacobian rings
``qdmcheck``
    I-function tables, annihilation and kernel-landing checks
``corpus``
    the standard small fans used by the tests and demos
``cli``
    the ``tglab`` command line front end
"""

from tglab.intlinalg import (
    IntegerMatrix,
    SmithDecomposition,
    smith_normal_form,
    kernel_lattice,
    section_system,
    extend_relation,
    homogenize,
)
from tglab.toricfan import Fan, total_space_fan, validate_fan

__all__ = [
    "IntegerMatrix",
    "SmithDecomposition",
    "smith_normal_form",
    "kernel_lattice",
    "section_system",
    "extend_relation",
    "homogenize",
    "Fan",
    "total_space_fan",
    "validate_fan",
]

__version__ = "0.1.0"
