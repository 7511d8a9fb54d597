"""Cyclic division algebra machinery for the 2x2 MIMO case.

The shipped catalog holds one algebra: the quartic field Q(i, sqrt5) over
Q(i) with cyclic generator flipping sqrt5 and non-norm element gamma = i
(the standard choice behind full-diversity 2x2 space-time codes; the
non-norm property is a catalog assertion).  Elements multiply by the rule
x e = e beta(x), matrices by the left regular representation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice_core import ComplexLattice
from .numberfield import FieldElement, NumberField, PrimeSplit, get_field

__all__ = [
    "CyclicAlgebra",
    "AlgebraElement",
    "golden_algebra",
    "matrix_rep",
    "natural_order_lattice",
    "natural_order_volume_formula",
    "reduce_algebra",
]


@dataclass(frozen=True)
class CyclicAlgebra:
    """(K / Q(i), beta, gamma) with beta given as radical sign flips."""

    field: NumberField
    beta_signs: tuple
    gamma: FieldElement
    degree: int = 2

    def beta(self, x: FieldElement) -> FieldElement:
        return self.field.apply_automorphism(x, self.beta_signs)

    def element(self, x0: FieldElement, x1: FieldElement) -> "AlgebraElement":
        return AlgebraElement(self, (x0, x1))

    def zero(self) -> "AlgebraElement":
        z = self.field.zero()
        return self.element(z, z)

    def one(self) -> "AlgebraElement":
        return self.element(self.field.one(), self.field.zero())


_golden_cache = {}


def golden_algebra() -> CyclicAlgebra:
    """The catalog 2x2 algebra over Q(i, sqrt5)."""
    if "alg" not in _golden_cache:
        K = get_field("golden")
        gamma = K.gen(1)  # i
        _golden_cache["alg"] = CyclicAlgebra(K, (1, -1), gamma)
    return _golden_cache["alg"]


class AlgebraElement:
    """a = x0 + e x1 with x0, x1 in O_K (exact coordinates)."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: CyclicAlgebra, coords):
        if len(coords) != algebra.degree:
            raise ValueError("coordinate count must match the algebra degree")
        self.algebra = algebra
        self.coords = tuple(coords)

    def __add__(self, other):
        return AlgebraElement(self.algebra,
                              tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, other):
        # (x0 + e x1)(y0 + e y1) = x0 y0 + gamma beta(x1) y1 + e (x1 y0 + beta(x0) y1)
        alg = self.algebra
        x0, x1 = self.coords
        y0, y1 = other.coords
        z0 = x0 * y0 + alg.gamma * alg.beta(x1) * y1
        z1 = x1 * y0 + alg.beta(x0) * y1
        return AlgebraElement(alg, (z0, z1))

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and self.coords == other.coords

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.coords)

    def __repr__(self):
        return f"AlgebraElement({self.coords[0]!r}, e*({self.coords[1]!r}))"


def matrix_rep(a: AlgebraElement) -> np.ndarray:
    """Left-regular 2x2 complex matrix: [[s(x0), g s(beta(x1))], [s(x1), s(beta(x0))]].

    s is the principal embedding; applying beta before s gives the second
    conjugate component.  Satisfies matrix_rep(a*b) = matrix_rep(a) @ matrix_rep(b).
    """
    alg = a.algebra
    x0, x1 = a.coords
    e0 = x0.embed()
    e1 = x1.embed()
    g = complex(alg.gamma.embed()[0])
    return np.array([[e0[0], g * e1[1]],
                     [e1[0], e0[1]]], dtype=complex)


def natural_order_lattice(alg: CyclicAlgebra, T: int = 1) -> ComplexLattice:
    """Lattice of vectorized matrix blocks of O_K + e O_K over T uses.

    Row-major vectorization, 4 complex coordinates per block; volume equals
    ((2^-m) |gamma|^(m(m-1)/2) sqrt(disc))^(m T) with m = 2.
    """
    if alg.degree != 2:
        raise ValueError("only the 2x2 catalog case is shipped")
    field = alg.field
    gens = []
    zero = field.zero()
    for t in range(T):
        for slot in range(2):
            for b in field.basis():
                coords = [zero, zero]
                coords[slot] = b
                X = matrix_rep(alg.element(*coords))
                row = np.zeros(4 * T, dtype=complex)
                row[4 * t: 4 * t + 4] = X.reshape(-1)
                gens.append(row)
    bc = np.array(gens, dtype=complex).T
    return ComplexLattice(bc, label=f"natural-order(T={T})")


def natural_order_volume_formula(alg: CyclicAlgebra, T: int = 1) -> float:
    m = alg.degree
    g = abs(complex(alg.gamma.embed()[0]))
    return float((2.0 ** (-m) * g ** (m * (m - 1) / 2)
                  * np.sqrt(abs(alg.field.discriminant))) ** (m * T))


def reduce_algebra(a: AlgebraElement, split: PrimeSplit) -> np.ndarray:
    """Componentwise residue of the matrix representation, as an array over F_p."""
    if split.residue_degree != 1:
        raise ValueError("reduction needs a completely split prime")
    alg = a.algebra
    x0, x1 = a.coords
    entries = [[x0, alg.gamma * alg.beta(x1)],
               [x1, alg.beta(x0)]]
    out = np.zeros((2, 2), dtype=np.int64)
    for i in range(2):
        for j in range(2):
            out[i, j] = split.reduce(entries[i][j])
    return out
