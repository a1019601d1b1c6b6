"""
Rational polyhedral cones in Q^d.

A cone is built from any finite generator list and kept in canonical form:
primitive extremal rays taken modulo the lineality space, a saturated basis
of the lineality space, and primitive facet normals inside the linear span.
Facet normals come from a double description pass over the generators
written in coordinates of the span.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional, Sequence
import logging

from .exactlat import (
    Sublattice,
    Vector,
    dot,
    integer_kernel,
    integral_multiple,
    lattice_intersect,
    primitive,
    rational_rank,
    solve_rational,
)
from .exceptions import NotAFacet

logger = logging.getLogger(__name__)


def _extreme_rays(inequalities: Sequence[Vector], k: int) -> list[Vector]:
    """Extreme rays of {y in Q^k : <g, y> >= 0 for all g} (double description)."""
    lineality: list[Vector] = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    rays: list[tuple[Vector, frozenset]] = []

    for idx, g in enumerate(inequalities):
        values = [dot(g, l) for l in lineality]
        j = next((i for i, v in enumerate(values) if v != 0), None)

        if j is not None:
            l, a = lineality.pop(j), values.pop(j)
            s = 1 if a > 0 else -1
            lineality = [
                primitive([a * x - v * y for x, y in zip(li, l)])
                for li, v in zip(lineality, values)
            ]
            moved = []
            for r, tight in rays:
                v = dot(g, r)
                moved.append((primitive([s * (a * x - v * y) for x, y in zip(r, l)]), tight | {idx}))
            rays = moved + [(primitive([s * y for y in l]), frozenset(range(idx)))]
            continue

        pos = [(r, t) for r, t in rays if dot(g, r) > 0]
        neg = [(r, t) for r, t in rays if dot(g, r) < 0]
        new = [(r, t | {idx}) for r, t in rays if dot(g, r) == 0] + pos
        for p, tp in pos:
            for n, tn in neg:
                common = tp & tn
                adjacent = not any(
                    common <= t for r, t in rays if r != p and r != n
                )
                if not adjacent:
                    continue
                vp, vn = dot(g, p), dot(g, n)
                w = primitive([vp * x - vn * y for x, y in zip(n, p)])
                new.append((w, common | {idx}))
        rays = new

    logger.debug("double description in dimension %d: %d rays", k, len(rays))
    return [r for r, _ in rays]


def _project_away(v: Sequence[int], lineality: Sublattice) -> list[Fraction]:
    """Orthogonal projection of v onto the complement of the lineality space."""
    basis = lineality.basis
    if not basis:
        return [Fraction(x) for x in v]
    gram = [[dot(a, b) for b in basis] for a in basis]
    s = solve_rational(gram, [dot(v, b) for b in basis], len(basis))
    return [Fraction(x) - sum(c * b[i] for c, b in zip(s, basis)) for i, x in enumerate(v)]


def _ambient_normal(span: Sublattice, y: Vector) -> Vector:
    """Primitive vector n in the span with <n, b_i> proportional to y_i for the span basis."""
    basis = span.basis
    gram = [[dot(a, b) for b in basis] for a in basis]
    t = solve_rational(gram, list(y), len(basis))
    n = [sum(c * b[i] for c, b in zip(t, basis)) for i in range(span.ambient_rank)]
    return integral_multiple(n)


def _format(v: Vector) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


@dataclass(frozen=True)
class RationalCone:
    ambient_rank: int
    rays: tuple[Vector, ...]
    lineality: Sublattice
    facet_normals: tuple[Vector, ...]
    span: Sublattice = field(compare=False)

    @classmethod
    def from_generators(cls, ambient_rank: int, generators: Sequence[Sequence[int]]) -> RationalCone:
        gens = tuple(sorted({tuple(int(x) for x in g) for g in generators}))
        return _build(ambient_rank, gens)

    @classmethod
    def origin(cls, ambient_rank: int) -> RationalCone:
        return _build(ambient_rank, ())

    @property
    def dim(self) -> int:
        return self.span.rank

    @property
    def generators(self) -> tuple[Vector, ...]:
        return self.rays + self.lineality.basis

    @property
    def cone_generators(self) -> tuple[Vector, ...]:
        """Generators as a cone: rays plus both signs of the lineality basis."""
        return self.rays + self.lineality.basis + tuple(
            tuple(-x for x in b) for b in self.lineality.basis
        )

    @property
    def key(self) -> tuple:
        return (self.rays, self.lineality.basis)

    @property
    def id(self) -> str:
        if not self.rays and not self.lineality.basis:
            return "<0>"
        parts = " ".join(_format(r) for r in self.rays)
        if self.lineality.basis:
            lin = " ".join(_format(b) for b in self.lineality.basis)
            parts = f"{parts} | lin {lin}".strip()
        return f"<{parts}>"

    def __repr__(self) -> str:
        return f"RationalCone{self.id}"

    def contains(self, p: Sequence) -> bool:
        return self.span.spans(p) and all(dot(n, p) >= 0 for n in self.facet_normals)

    def relint_contains(self, p: Sequence) -> bool:
        return self.span.spans(p) and all(dot(n, p) > 0 for n in self.facet_normals)

    def contains_cone(self, other: RationalCone) -> bool:
        return all(self.contains(g) for g in other.cone_generators)

    def tight_normals(self, p: Sequence) -> tuple[Vector, ...]:
        return tuple(n for n in self.facet_normals if dot(n, p) == 0)

    def face_cut_by(self, normals: Sequence[Vector]) -> RationalCone:
        gens = [g for g in self.cone_generators if all(dot(n, g) == 0 for n in normals)]
        return RationalCone.from_generators(self.ambient_rank, gens)


def sort_key(cone: RationalCone) -> tuple:
    return (-cone.dim, cone.key)


@lru_cache(maxsize=None)
def _build(d: int, gens: tuple[Vector, ...]) -> RationalCone:
    gens = tuple(g for g in gens if any(g))
    span = Sublattice.from_generators(d, gens).saturation()
    k = span.rank
    coords = [span.coordinates(g) for g in gens]

    normals = tuple(sorted({_ambient_normal(span, y) for y in _extreme_rays(coords, k)}))
    orthogonal = Sublattice.from_generators(d, integer_kernel(normals, d))
    lineality = lattice_intersect(orthogonal, span) if normals else span

    pointed = k - lineality.rank
    rays = set()
    for g in gens:
        p = _project_away(g, lineality)
        if not any(p):
            continue
        r = integral_multiple(p)
        tight = [n for n in normals if dot(n, r) == 0]
        if rational_rank(tight) == pointed - 1:
            rays.add(r)
    return RationalCone(d, tuple(sorted(rays)), lineality, normals, span)


def dual_cone(c: RationalCone) -> RationalCone:
    perp = c.span.orthogonal_complement().basis
    gens = list(c.facet_normals) + list(perp) + [tuple(-x for x in b) for b in perp]
    return RationalCone.from_generators(c.ambient_rank, gens)


def cone_sum(a: RationalCone, b: RationalCone) -> RationalCone:
    return RationalCone.from_generators(a.ambient_rank, a.cone_generators + b.cone_generators)


def intersect(a: RationalCone, b: RationalCone) -> RationalCone:
    return dual_cone(cone_sum(dual_cone(a), dual_cone(b)))


@dataclass(frozen=True)
class FacePoset:
    parent: RationalCone
    faces: tuple[RationalCone, ...]
    codim: dict = field(compare=False, hash=False)
    relation: tuple[tuple[RationalCone, RationalCone], ...] = field(compare=False, hash=False)

    def of_codim(self, k: int) -> list[RationalCone]:
        return [f for f in self.faces if self.codim[f] == k]

    @property
    def facets(self) -> list[RationalCone]:
        return self.of_codim(1)

    @property
    def minimal(self) -> RationalCone:
        return self.faces[-1]

    def __contains__(self, cone: RationalCone) -> bool:
        return cone in self.codim


@lru_cache(maxsize=None)
def faces(c: RationalCone) -> FacePoset:
    """All faces, as intersections of c with hyperplanes of its facet normals."""
    closed = {frozenset(c.cone_generators): c}
    queue = [frozenset(c.cone_generators)]
    while queue:
        gens = queue.pop()
        for n in c.facet_normals:
            sub = frozenset(g for g in gens if dot(n, g) == 0)
            if sub not in closed:
                closed[sub] = RationalCone.from_generators(c.ambient_rank, sub)
                queue.append(sub)

    found = sorted(set(closed.values()), key=sort_key)
    codim = {f: c.dim - f.dim for f in found}
    relation = tuple(
        (small, big) for big in found for small in found
        if small != big and big.contains_cone(small)
    )
    return FacePoset(c, tuple(found), codim, relation)


def facet_normal(c: RationalCone, f: RationalCone) -> Vector:
    poset = faces(c)
    if f not in poset or poset.codim[f] != 1:
        raise NotAFacet(f"{f.id} is not a codimension one face of {c.id}")
    for n in c.facet_normals:
        if all(dot(n, g) == 0 for g in f.cone_generators):
            return n
    raise NotAFacet(f"no facet normal of {c.id} vanishes on {f.id}")


def facet_functional(c: RationalCone, f: RationalCone, lattice: Sublattice) -> tuple[Fraction, ...]:
    """
    The facet normal of f in c, rescaled to be primitive on ``lattice``
    (a full rank sublattice of the span of c).
    """
    n = facet_normal(c, f)
    g = gcd(*(dot(n, b) for b in lattice.basis))
    return tuple(Fraction(x, g) for x in n)


def relint_contains(c: RationalCone, p: Sequence) -> bool:
    return c.relint_contains(p)


def face_of_relint(poset: FacePoset, p: Sequence) -> Optional[RationalCone]:
    """The face containing p in its relative interior, None if p is outside."""
    parent = poset.parent
    if not parent.contains(p):
        return None
    return parent.face_cut_by(parent.tight_normals(p))
