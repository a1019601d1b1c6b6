"""
Exact integer and rational linear algebra over the ambient lattice Z^d.

Sublattices are kept in row-style Hermite normal form so that two values
describing the same subgroup compare equal. Nothing here uses floats.
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm, prod
from typing import Iterable, Optional, Sequence
import logging

from sympy import Matrix, Rational
from sympy.core.intfunc import igcdex

from .exceptions import ConsistencyError, ContainmentViolation, SpanMismatch

logger = logging.getLogger(__name__)

Vector = tuple[int, ...]
INFINITE = "infinite"


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def primitive(v: Sequence[int]) -> Vector:
    """Divide an integer vector by the gcd of its entries."""
    g = gcd(*v) if v else 0
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def integral_multiple(v: Sequence) -> Vector:
    """Smallest positive multiple of a rational vector that is a primitive integer vector."""
    fracs = [Fraction(x) for x in v]
    den = lcm(*(f.denominator for f in fracs)) if fracs else 1
    return primitive([int(f * den) for f in fracs])


def as_integer_vector(v: Sequence) -> Optional[Vector]:
    out = []
    for x in v:
        f = Fraction(x)
        if f.denominator != 1:
            return None
        out.append(f.numerator)
    return tuple(out)


def _combine(m: list[list[int]], i: int, j: int, a: int, b: int, c: int, d: int) -> None:
    # replace m[i] by a*m[i] + b*m[j]
    # and m[j] by c*m[i] + d*m[j]
    ri, rj = m[i], m[j]
    m[i] = [a * x + b * y for x, y in zip(ri, rj)]
    m[j] = [c * x + d * y for x, y in zip(ri, rj)]


def hnf(mat: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """
    Row-style Hermite normal form.

    Returns (H, U) with U unimodular and U·mat = H. Pivots of H are positive,
    entries above a pivot lie in [0, pivot), and zero rows trail.
    """
    rows = [[int(x) for x in r] for r in mat]
    m = len(rows)
    if m == 0:
        return [], []
    n = len(rows[0])
    U = [[int(i == j) for j in range(m)] for i in range(m)]

    pivot = 0
    for col in range(n):
        if pivot == m:
            break
        nonzero = [i for i in range(pivot, m) if rows[i][col] != 0]
        if not nonzero:
            continue
        if rows[pivot][col] == 0:
            k = nonzero[0]
            rows[pivot], rows[k] = rows[k], rows[pivot]
            U[pivot], U[k] = U[k], U[pivot]
        for i in range(pivot + 1, m):
            b = rows[i][col]
            if b == 0:
                continue
            a = rows[pivot][col]
            x, y, g = (int(t) for t in igcdex(a, b))
            _combine(rows, pivot, i, x, y, -b // g, a // g)
            _combine(U, pivot, i, x, y, -b // g, a // g)
        if rows[pivot][col] < 0:
            rows[pivot] = [-x for x in rows[pivot]]
            U[pivot] = [-x for x in U[pivot]]
        p = rows[pivot][col]
        for k in range(pivot):
            q = rows[k][col] // p
            if q:
                rows[k] = [x - q * y for x, y in zip(rows[k], rows[pivot])]
                U[k] = [x - q * y for x, y in zip(U[k], U[pivot])]
        pivot += 1

    logger.debug("hnf of %dx%d matrix has rank %d", m, n, pivot)
    return rows, U


def _leading_index(row: Sequence[int]) -> int:
    return next(i for i, x in enumerate(row) if x != 0)


def _back_substitute(rows: Sequence[Vector], v: Sequence[int]) -> Optional[Vector]:
    residual = as_integer_vector(v)
    if residual is None:
        return None
    residual = list(residual)
    coeffs = []
    for row in rows:
        p = _leading_index(row)
        c, rem = divmod(residual[p], row[p])
        if rem:
            return None
        residual = [r - c * x for r, x in zip(residual, row)]
        coeffs.append(c)
    if any(residual):
        return None
    return tuple(coeffs)


def integer_kernel(rows: Sequence[Sequence[int]], n: int) -> list[Vector]:
    """Basis of {x in Z^n : A x = 0} for A given by its rows."""
    if not rows:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    transpose = [[int(r[j]) for r in rows] for j in range(n)]
    H, U = hnf(transpose)
    return [tuple(U[i]) for i in range(n) if not any(H[i])]


def integer_combination(generators: Sequence[Sequence[int]], v: Sequence[int]) -> Optional[Vector]:
    """Integer coefficients c with sum(c_i g_i) = v, or None."""
    if not generators:
        return () if not any(v) else None
    H, U = hnf(generators)
    pivots = [i for i in range(len(H)) if any(H[i])]
    w = _back_substitute([tuple(H[i]) for i in pivots], v)
    if w is None:
        return None
    return tuple(sum(wi * U[i][j] for wi, i in zip(w, pivots)) for j in range(len(generators)))


def _det(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 1
    return int(Matrix([list(r) for r in rows]).det())


@dataclass(frozen=True)
class Sublattice:
    """A subgroup of Z^d, stored by the nonzero rows of its Hermite normal form."""

    ambient_rank: int
    basis: tuple[Vector, ...] = ()

    @classmethod
    def from_generators(cls, ambient_rank: int, generators: Iterable[Sequence[int]]) -> Sublattice:
        gens = []
        for g in generators:
            vec = as_integer_vector(g)
            if vec is None or len(vec) != ambient_rank:
                raise ValueError(f"{g!r} is not an integer vector of length {ambient_rank}")
            gens.append(vec)
        H, _ = hnf(gens)
        return cls(ambient_rank, tuple(tuple(r) for r in H if any(r)))

    @classmethod
    def full(cls, ambient_rank: int) -> Sublattice:
        return cls(ambient_rank, tuple(
            tuple(int(i == j) for j in range(ambient_rank)) for i in range(ambient_rank)
        ))

    @classmethod
    def zero(cls, ambient_rank: int) -> Sublattice:
        return cls(ambient_rank, ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence) -> Optional[Vector]:
        """Integer coordinates of v in the HNF basis, or None if v is not in the lattice."""
        if len(v) != self.ambient_rank:
            raise ValueError("ambient rank mismatch")
        return _back_substitute(self.basis, v)

    def __contains__(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def vector(self, coeffs: Sequence[int]) -> Vector:
        out = [0] * self.ambient_rank
        for c, row in zip(coeffs, self.basis):
            out = [o + c * x for o, x in zip(out, row)]
        return tuple(out)

    def contains_lattice(self, other: Sublattice) -> bool:
        return all(b in self for b in other.basis)

    def orthogonal_complement(self) -> Sublattice:
        return _orthogonal_complement(self)

    def saturation(self) -> Sublattice:
        """All lattice points of the rational span."""
        return _saturation(self)

    def is_saturated(self) -> bool:
        return self == self.saturation()

    def spans(self, v: Sequence) -> bool:
        """Whether a rational vector lies in the rational span."""
        if not any(v) or self.rank == self.ambient_rank:
            return True
        return integral_multiple(v) in self.saturation()

    def label(self) -> str:
        if not self.basis:
            return "0"
        return " + ".join("Z(" + ",".join(str(x) for x in b) + ")" for b in self.basis)


@lru_cache(maxsize=None)
def _orthogonal_complement(lattice: Sublattice) -> Sublattice:
    return Sublattice.from_generators(
        lattice.ambient_rank, integer_kernel(lattice.basis, lattice.ambient_rank)
    )


@lru_cache(maxsize=None)
def _saturation(lattice: Sublattice) -> Sublattice:
    return _orthogonal_complement(_orthogonal_complement(lattice))


def lattice_sum(a: Sublattice, b: Sublattice) -> Sublattice:
    return Sublattice.from_generators(a.ambient_rank, a.basis + b.basis)


def lattice_intersect(a: Sublattice, b: Sublattice) -> Sublattice:
    d = a.ambient_rank
    if d != b.ambient_rank:
        raise ValueError("ambient rank mismatch")
    if not a.basis or not b.basis:
        return Sublattice.zero(d)
    stacked = list(a.basis) + [tuple(-x for x in v) for v in b.basis]
    relations = integer_kernel([[v[j] for v in stacked] for j in range(d)], len(stacked))
    k = a.rank
    return Sublattice.from_generators(d, [a.vector(c[:k]) for c in relations])


def restrict_to_span(lattice: Sublattice, span: Sublattice) -> Sublattice:
    """lattice ∩ (rational span of ``span``)."""
    return lattice_intersect(lattice, span.saturation())


def sublattice_index(inner: Sublattice, outer: Sublattice) -> int | str:
    """[outer : inner], or INFINITE when the ranks differ."""
    for b in inner.basis:
        if b not in outer:
            raise ContainmentViolation(
                f"{b} lies in {inner.label()} but not in {outer.label()}",
                inner=inner, outer=outer,
            )
    if inner.rank < outer.rank:
        return INFINITE
    H, _ = hnf([outer.coordinates(b) for b in inner.basis])
    return prod(H[i][i] for i in range(len(H)))


@dataclass(frozen=True)
class OrientedBasis:
    """An ordered basis (m_1, ..., m_k) of a sublattice."""

    sublattice: Sublattice
    vectors: tuple[Vector, ...]

    def __post_init__(self):
        if len(self.vectors) != self.sublattice.rank or Sublattice.from_generators(
            self.sublattice.ambient_rank, self.vectors
        ) != self.sublattice:
            raise SpanMismatch(f"{self.vectors} is not a basis of {self.sublattice.label()}")

    @classmethod
    def canonical(cls, lattice: Sublattice) -> OrientedBasis:
        return cls(lattice, lattice.basis)

    def swapped(self, i: int = 0, j: int = 1) -> OrientedBasis:
        vecs = list(self.vectors)
        vecs[i], vecs[j] = vecs[j], vecs[i]
        return OrientedBasis(self.sublattice, tuple(vecs))

    def coordinate_matrix(self) -> list[Vector]:
        return [self.sublattice.coordinates(v) for v in self.vectors]


def orientation_sign(b1: OrientedBasis, b2: OrientedBasis) -> int:
    """Sign of the determinant of the change of basis from b1 to b2."""
    if b1.sublattice != b2.sublattice:
        raise SpanMismatch(
            f"{b1.sublattice.label()} and {b2.sublattice.label()} are different lattices"
        )
    return _det(b1.coordinate_matrix()) * _det(b2.coordinate_matrix())


def signed_volume(vectors: Sequence[Sequence[int]], lattice: Sublattice) -> int:
    """
    Determinant of ``vectors`` written in the canonical basis of ``lattice``.

    The absolute value is the index of the sublattice they generate; the sign
    compares their order with the canonical orientation.
    """
    coords = []
    for v in vectors:
        c = lattice.coordinates(v)
        if c is None:
            raise ContainmentViolation(f"{tuple(v)} is not in {lattice.label()}")
        coords.append(c)
    if len(coords) != lattice.rank:
        raise SpanMismatch("need exactly rank many vectors")
    return _det(coords)


def solve_integral(A: Sequence[Sequence[int]], c: Sequence[int], lattice: Sublattice) -> Optional[Vector]:
    """Some m in ``lattice`` with A·m = c, or None if there is none."""
    B = lattice.basis
    k, r = len(B), len(A)
    if len(c) != r:
        raise ValueError("right-hand side has the wrong length")
    M = [[dot(a, b) for b in B] for a in A]
    MT = [[M[i][j] for i in range(r)] for j in range(k)]
    H, U = hnf(MT)
    pivot_rows = [i for i in range(len(H)) if any(H[i])]
    w = _back_substitute([tuple(H[i]) for i in pivot_rows], c)
    if w is None:
        return None
    z = [sum(wi * U[i][j] for wi, i in zip(w, pivot_rows)) for j in range(k)]
    m = lattice.vector(z)
    if any(dot(a, m) != ci for a, ci in zip(A, c)):
        logger.error("solve_integral produced %s which does not solve the system", m)
        raise ConsistencyError("integral solve failed verification")
    return m


def _to_rational(x) -> Rational:
    f = Fraction(x)
    return Rational(f.numerator, f.denominator)


def rational_rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], tuple[int, ...]]:
    if not rows:
        return [], ()
    R, pivots = Matrix([[_to_rational(x) for x in r] for r in rows]).rref()
    out = [[Fraction(int(e.p), int(e.q)) for e in R.row(i)] for i in range(R.rows)]
    return out, tuple(pivots)


def solve_rational(rows: Sequence[Sequence], rhs: Sequence, n: int) -> Optional[list[Fraction]]:
    """
    A rational solution of rows·x = rhs, with every free variable of the
    reduced row echelon form set to zero; None if inconsistent.
    """
    if not rows:
        return [Fraction(0)] * n
    R, pivots = rational_rref([list(r) + [b] for r, b in zip(rows, rhs)])
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = R[i][n]
    return x


def rational_rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rational_rref(rows)[1])
