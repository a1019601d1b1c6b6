"""
Monoidal complexes M = (M, Δ, (S_σ)).

A complex is given by its maximal cones and one of two kinds of semigroup
data:
  - generator mode: for every facet F, integer generators of S_F;
  - lattice family mode: for every cone σ, a full rank sublattice Λ_σ of the
    span of σ, describing S = ⊔ Λ_σ ∩ relint σ.

``validate`` turns a RawComplex into a MonoidalComplex or raises
InvalidComplex with one Violation per broken invariant.
"""

from __future__ import annotations
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence, Union
import logging

from sympy.ntheory import isprime

from .cones import RationalCone, face_of_relint, faces, intersect, sort_key
from .conf import get_setting
from .exactlat import Sublattice, Vector, as_integer_vector, dot, lattice_intersect
from .exceptions import (
    InvalidComplex,
    NotSimplicial,
    PreconditionFailed,
    SearchExhausted,
    Violation,
)

logger = logging.getLogger(__name__)

GENERATORS = "generators"
LATTICE_FAMILY = "lattice_family"
MODES = (GENERATORS, LATTICE_FAMILY)

ConeRef = Union[RationalCone, str]


class AffineSemigroup:
    """
    The N-span of finitely many integer vectors.

    Membership splits the generators into those in the lineality space of
    their cone (they generate a group) and the rest, then runs a depth first
    search bounded by phi, the sum of the facet normals, which is positive on
    every remaining generator.
    """

    def __init__(self, ambient_rank: int, generators: Iterable[Sequence[int]]):
        gens = sorted({tuple(int(x) for x in g) for g in generators if any(g)})
        self.ambient_rank = ambient_rank
        self.generators = tuple(gens)
        self.cone = RationalCone.from_generators(ambient_rank, gens)
        normals = self.cone.facet_normals
        self.group_generators = tuple(g for g in gens if all(dot(n, g) == 0 for n in normals))
        self.pointed = tuple(g for g in gens if g not in self.group_generators)
        self.group = Sublattice.from_generators(ambient_rank, self.group_generators)
        self._failed: set[tuple[Vector, int]] = set()

    def decompose(self, m: Sequence) -> Optional[tuple[tuple[Vector, ...], Vector]]:
        """
        Return (pointed generators used, remainder in the group part) with
        m = sum(used) + remainder, or None when m is not in the semigroup.
        """
        v = as_integer_vector(m)
        if v is None or len(v) != self.ambient_rank or not self.cone.contains(v):
            return None
        if v in self.group:
            return (), v

        limit = get_setting("SEARCH_LIMIT")
        frames = [[v, 0, 0]]
        used: list[Vector] = []
        nodes = 0
        while frames:
            frame = frames[-1]
            r, i, start = frame
            if i >= len(self.pointed):
                self._failed.add((r, start))
                frames.pop()
                if used:
                    used.pop()
                continue
            frame[1] += 1
            g = self.pointed[i]
            nxt = tuple(a - b for a, b in zip(r, g))
            if (nxt, i) in self._failed or not self.cone.contains(nxt):
                continue
            nodes += 1
            if nodes > limit:
                raise SearchExhausted(
                    f"semigroup search for {v} exceeded {limit} nodes", point=v
                )
            used.append(g)
            if nxt in self.group:
                return tuple(used), nxt
            frames.append([nxt, i, i])
        return None

    def __contains__(self, m: Sequence) -> bool:
        return self.decompose(m) is not None


@dataclass(frozen=True)
class RawComplex:
    """Unvalidated complex description, cones keyed by user aliases."""

    ambient_rank: int
    maximal_cones: dict[str, list[Sequence[int]]]
    mode: str = LATTICE_FAMILY
    faces: dict[str, list[Sequence[int]]] = field(default_factory=dict)
    semigroups: dict[str, list[Sequence[int]]] = field(default_factory=dict)
    lattices: dict[str, list[Sequence[int]]] = field(default_factory=dict)
    characteristic: int = 0


class MonoidalComplex:
    def __init__(
        self,
        ambient_rank: int,
        facets: Iterable[RationalCone],
        mode: str,
        *,
        lattices: Optional[dict[RationalCone, Sublattice]] = None,
        generators: Optional[dict[RationalCone, tuple[Vector, ...]]] = None,
        characteristic: int = 0,
        aliases: Optional[dict[str, RationalCone]] = None,
    ):
        self.ambient_rank = ambient_rank
        self.facets = tuple(sorted(set(facets), key=sort_key))
        self.mode = mode
        self.characteristic = characteristic
        self.cones = tuple(sorted({f for F in self.facets for f in faces(F).faces}, key=sort_key))
        self.containing_facets = {
            c: tuple(F for F in self.facets if c in faces(F)) for c in self.cones
        }
        self.aliases = {a: c for a, c in (aliases or {}).items() if c in self.containing_facets}
        self._names = {}
        for a, c in sorted(self.aliases.items()):
            self._names.setdefault(c, a)
        self._lattices = dict(lattices or {})
        self._generators = dict(generators or {})
        self._semigroups: dict[RationalCone, AffineSemigroup] = {}

    # -- lookup ---------------------------------------------------------

    def cone(self, ref: ConeRef) -> RationalCone:
        if isinstance(ref, RationalCone):
            if ref not in self.containing_facets:
                raise KeyError(f"{ref.id} is not a cone of the fan")
            return ref
        if ref in self.aliases:
            return self.aliases[ref]
        for c in self.cones:
            if c.id == ref:
                return c
        raise KeyError(f"unknown cone {ref!r}")

    def name(self, cone: RationalCone) -> str:
        return self._names.get(cone, cone.id)

    @property
    def dimension(self) -> int:
        return max((F.dim for F in self.facets), default=0)

    def codim(self, cone: RationalCone) -> int:
        return self.dimension - cone.dim

    def is_facet(self, cone: RationalCone) -> bool:
        return cone in self.facets

    def facets_containing(self, cone: RationalCone) -> tuple[RationalCone, ...]:
        return self.containing_facets[cone]

    def cones_containing(self, cone: RationalCone) -> list[RationalCone]:
        return [c for c in self.cones if c != cone and c.contains_cone(cone)]

    def meet(self, a: RationalCone, b: RationalCone) -> RationalCone:
        """a ∩ b for two cones of the fan."""
        common = [
            c for c in self.cones
            if a.contains_cone(c) and b.contains_cone(c)
        ]
        return max(common, key=lambda c: c.dim)

    def codim_one_pairs(self) -> list[tuple[RationalCone, RationalCone]]:
        """(τ, F) with τ a codimension one face of the facet F."""
        return [(tau, F) for F in self.facets for tau in faces(F).facets]

    def primes(self) -> list[RationalCone]:
        """Cones of codimension one in some facet: the invariant prime divisors."""
        return sorted({tau for tau, _ in self.codim_one_pairs()}, key=sort_key)

    # -- semigroup data ------------------------------------------------

    def semigroup_generators(self, cone: RationalCone) -> tuple[Vector, ...]:
        if self.mode != GENERATORS:
            raise PreconditionFailed("lattice family complexes carry no semigroup generators")
        F = self.containing_facets[cone][0]
        return tuple(g for g in self._generators[F] if cone.contains(g))

    def semigroup(self, cone: RationalCone) -> AffineSemigroup:
        if cone not in self._semigroups:
            self._semigroups[cone] = AffineSemigroup(self.ambient_rank, self.semigroup_generators(cone))
        return self._semigroups[cone]

    def lattice(self, cone: RationalCone) -> Sublattice:
        """Λ_σ, which is S_σ − S_σ in generator mode."""
        if self.mode == LATTICE_FAMILY:
            return self._lattices[cone]
        return Sublattice.from_generators(self.ambient_rank, self.semigroup_generators(cone))

    # -- derived complexes -------------------------------------------

    def with_characteristic(self, characteristic: int) -> MonoidalComplex:
        return MonoidalComplex(
            self.ambient_rank, self.facets, self.mode,
            lattices=self._lattices, generators=self._generators,
            characteristic=characteristic, aliases=self.aliases,
        )

    def as_lattice_family(self) -> MonoidalComplex:
        if self.mode == LATTICE_FAMILY:
            return self
        return MonoidalComplex(
            self.ambient_rank, self.facets, LATTICE_FAMILY,
            lattices={c: self.lattice(c) for c in self.cones},
            characteristic=self.characteristic, aliases=self.aliases,
        )

    def restrict(self, cones: Iterable[ConeRef]) -> Optional[MonoidalComplex]:
        """The subcomplex generated by the given cones, None when empty."""
        chosen = {self.cone(c) for c in cones}
        if not chosen:
            return None
        closure = {f for c in chosen for f in faces(c).faces}
        maximal = [c for c in closure if not any(o != c and o.contains_cone(c) for o in closure)]
        source = self.as_lattice_family()
        return MonoidalComplex(
            self.ambient_rank, maximal, LATTICE_FAMILY,
            lattices={c: source.lattice(c) for c in closure},
            characteristic=self.characteristic,
            aliases={a: c for a, c in self.aliases.items() if c in closure},
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonoidalComplex):
            return NotImplemented
        if (self.ambient_rank, self.facets, self.mode, self.characteristic) != (
            other.ambient_rank, other.facets, other.mode, other.characteristic
        ):
            return False
        if self.mode == LATTICE_FAMILY:
            return all(self.lattice(c) == other.lattice(c) for c in self.cones)
        return self._generators == other._generators

    __hash__ = None

    def __repr__(self) -> str:
        return f"MonoidalComplex(d={self.ambient_rank}, facets={[F.id for F in self.facets]}, mode={self.mode})"


# -- validation ------------------------------------------------------------

def _resolve(aliases: dict[str, RationalCone], cones: Sequence[RationalCone], ref: str) -> Optional[RationalCone]:
    if ref in aliases:
        return aliases[ref]
    return next((c for c in cones if c.id == ref), None)


def _default_lattices(cones: Sequence[RationalCone], given: dict[RationalCone, Sublattice]) -> dict:
    """Missing Λ_σ: the largest lattice compatible with every cone above σ."""
    lattices = dict(given)
    for c in sorted(cones, key=sort_key):
        if c in lattices:
            continue
        above = [o for o in cones if o != c and o.contains_cone(c)]
        if not above:
            lattices[c] = c.span
            continue
        lat = lattices[above[0]]
        for o in above[1:]:
            lat = lattice_intersect(lat, lattices[o])
        lattices[c] = lattice_intersect(lat, c.span)
    return lattices


def validate(raw: RawComplex) -> MonoidalComplex:
    d = raw.ambient_rank
    violations: list[Violation] = []

    p = raw.characteristic
    if p != 0 and not (p > 1 and isprime(p)):
        violations.append(Violation("CharacteristicViolation", f"characteristic {p} is neither 0 nor prime"))
    if raw.mode not in MODES:
        violations.append(Violation("ModeViolation", f"unknown semigroup mode {raw.mode!r}"))

    given = {a: RationalCone.from_generators(d, g) for a, g in sorted(raw.maximal_cones.items())}
    maximal = {}
    for a, c in given.items():
        if any(o != c and o.contains_cone(c) for o in given.values()):
            logger.warning("cone %s is a face of another maximal cone, dropped", a)
            continue
        maximal.setdefault(c, a)

    for (F, a), (G, b) in combinations(maximal.items(), 2):
        meet = intersect(F, G)
        if meet not in faces(F) or meet not in faces(G):
            violations.append(Violation(
                "FanIntersectionViolation",
                f"{a} ∩ {b} = {meet.id} is not a face of both",
                (a, b),
            ))
    if violations:
        raise InvalidComplex(violations)

    facets = sorted(maximal, key=sort_key)
    cones = sorted({f for F in facets for f in faces(F).faces}, key=sort_key)
    aliases = dict(given)
    for a, g in sorted(raw.faces.items()):
        c = RationalCone.from_generators(d, g)
        if c not in cones:
            violations.append(Violation("UnknownCone", f"face {a} = {c.id} is not in the fan", (a,)))
            continue
        aliases[a] = c

    generators: dict[RationalCone, tuple[Vector, ...]] = {}
    lattices: dict[RationalCone, Sublattice] = {}

    if raw.mode == GENERATORS:
        for a in raw.semigroups:
            if a not in maximal.values():
                violations.append(Violation("UnknownCone", f"semigroup given for non-facet {a}", (a,)))
        for F, a in maximal.items():
            gens = tuple(tuple(int(x) for x in g) for g in raw.semigroups.get(a, raw.maximal_cones[a]))
            if RationalCone.from_generators(d, gens) != F:
                violations.append(Violation(
                    "GeneratorConeMismatch", f"generators of S_{a} do not generate the cone {F.id}", (a,)
                ))
            generators[F] = gens
        for (F, a), (G, b) in combinations(maximal.items(), 2):
            if F not in generators or G not in generators:
                continue
            shared = [c for c in cones if F.contains_cone(c) and G.contains_cone(c)]
            tau = max(shared, key=lambda c: c.dim)
            from_f = [g for g in generators[F] if tau.contains(g)]
            from_g = [g for g in generators[G] if tau.contains(g)]
            sf, sg = AffineSemigroup(d, from_f), AffineSemigroup(d, from_g)
            if not (all(g in sg for g in from_f) and all(g in sf for g in from_g)):
                violations.append(Violation(
                    "SemigroupMismatch", f"S_{a} and S_{b} restrict differently to {tau.id}", (a, b)
                ))
    else:
        for a, gens in sorted(raw.lattices.items()):
            c = _resolve(aliases, cones, a)
            if c is None:
                violations.append(Violation("UnknownCone", f"lattice given for unknown cone {a}", (a,)))
                continue
            lattices[c] = Sublattice.from_generators(d, gens)
        lattices = _default_lattices(cones, lattices)
        for c in cones:
            lat = lattices[c]
            if lat.rank != c.dim or not c.span.contains_lattice(lat):
                violations.append(Violation(
                    "LatticeRankViolation",
                    f"Λ for {c.id} = {lat.label()} is not of full rank in the span", (c.id,),
                ))
        for F in facets:
            for small, big in faces(F).relation:
                if not lattices[big].contains_lattice(lattices[small]):
                    v = Violation(
                        "CompatibilityViolation",
                        f"Λ_{small.id} = {lattices[small].label()} is not inside Λ_{big.id} = {lattices[big].label()}",
                        (small.id, big.id),
                    )
                    if v not in violations:
                        violations.append(v)

    if violations:
        raise InvalidComplex(violations)

    mc = MonoidalComplex(
        d, facets, raw.mode,
        lattices=lattices, generators=generators,
        characteristic=raw.characteristic, aliases=aliases,
    )
    logger.info("validated complex with %d facets and %d cones", len(mc.facets), len(mc.cones))
    return mc


# -- facet graph -----------------------------------------------------------

@dataclass(frozen=True)
class FacetGraph:
    vertices: tuple[RationalCone, ...]
    edges: tuple[tuple[RationalCone, RationalCone, RationalCone], ...]

    def neighbours(self, F: RationalCone, allowed: Optional[set] = None) -> list[RationalCone]:
        out = []
        for a, b, _ in self.edges:
            other = b if a == F else a if b == F else None
            if other is not None and (allowed is None or other in allowed):
                out.append(other)
        return out

    def label(self, F: RationalCone, G: RationalCone) -> Optional[RationalCone]:
        for a, b, tau in self.edges:
            if {a, b} == {F, G}:
                return tau
        return None


def facet_graph(mc: MonoidalComplex) -> FacetGraph:
    edges = []
    for F, G in combinations(mc.facets, 2):
        tau = mc.meet(F, G)
        if tau.dim == F.dim - 1 and tau.dim == G.dim - 1:
            edges.append((F, G, tau))
    return FacetGraph(mc.facets, tuple(edges))


def _path(graph: FacetGraph, start, goal, allowed: Optional[set] = None) -> Optional[list]:
    parent = {start: None}
    queue = deque([start])
    while queue:
        F = queue.popleft()
        if F == goal:
            path = []
            while F is not None:
                path.append(F)
                F = parent[F]
            return path[::-1]
        for G in graph.neighbours(F, allowed):
            if G not in parent:
                parent[G] = F
                queue.append(G)
    return None


@dataclass(frozen=True)
class Connectivity:
    connected: bool
    failing_pair: Optional[tuple[RationalCone, RationalCone]] = None
    chains: dict = field(default_factory=dict, compare=False)


def is_1_connected(mc: MonoidalComplex) -> Connectivity:
    graph = facet_graph(mc)
    chains = {}
    for F, G in combinations(mc.facets, 2):
        meet = mc.meet(F, G)
        allowed = set(mc.facets_containing(meet))
        path = _path(graph, F, G, allowed)
        if path is None:
            return Connectivity(False, (F, G))
        chains[(F, G)] = tuple(path)
    return Connectivity(True, None, chains)


def semigroup_contains(mc: MonoidalComplex, sigma: ConeRef, m: Sequence) -> bool:
    sigma = mc.cone(sigma)
    if not sigma.contains(m):
        return False
    if mc.mode == LATTICE_FAMILY:
        return m in mc.lattice(face_of_relint(faces(sigma), m))
    return m in mc.semigroup(sigma)


# -- builders ----------------------------------------------------------------

def _unit(n: int, i: int) -> Vector:
    return tuple(int(i == j) for j in range(n))


def _coordinate_name(indices: Iterable[int]) -> str:
    idx = list(indices)
    return "".join(f"e{i + 1}" for i in idx) or "0"


def _all_face_aliases(n: int, top: int) -> dict[str, list[Vector]]:
    return {
        _coordinate_name(s): [_unit(n, i) for i in s]
        for k in range(top + 1) for s in combinations(range(n), k)
    }


def coordinate_arrangement(n: int, p: int, characteristic: int = 0) -> MonoidalComplex:
    """Faces of the positive orthant of Z^n of codimension at least p, saturated lattices."""
    if not 0 <= p <= n:
        raise ValueError(f"need 0 <= p <= n, got n={n}, p={p}")
    top = n - p
    maximal = {_coordinate_name(s): [_unit(n, i) for i in s] for s in combinations(range(n), top)}
    lower = {a: g for a, g in _all_face_aliases(n, top).items() if a not in maximal}
    return validate(RawComplex(n, maximal, LATTICE_FAMILY, faces=lower, characteristic=characteristic))


def stanley_reisner(vertices: int, facets: Sequence[Sequence[int]], characteristic: int = 0) -> MonoidalComplex:
    """Cones over the faces of a simplicial complex on vertices 1..n."""
    maximal = {}
    for f in facets:
        if len(set(f)) != len(f) or any(not 1 <= v <= vertices for v in f):
            raise NotSimplicial(f"{list(f)} is not a face on vertices 1..{vertices}")
        idx = sorted(v - 1 for v in f)
        maximal[_coordinate_name(idx)] = [_unit(vertices, i) for i in idx]
    lower = {}
    for f in facets:
        for k in range(len(f)):
            for s in combinations(sorted(v - 1 for v in f), k):
                name = _coordinate_name(s)
                if name not in maximal:
                    lower[name] = [_unit(vertices, i) for i in s]
    return validate(RawComplex(vertices, maximal, LATTICE_FAMILY, faces=lower, characteristic=characteristic))


def cusp_cone(characteristic: int = 0) -> MonoidalComplex:
    """cone((1,0),(1,2)) with S = Z^2 ∩ σ."""
    return validate(RawComplex(
        2,
        {"sigma": [(1, 0), (1, 2)]},
        LATTICE_FAMILY,
        faces={"tau1": [(1, 0)], "tau2": [(1, 2)], "origin": []},
        characteristic=characteristic,
    ))


def affine_semigroup(generators: Sequence[Sequence[int]], characteristic: int = 0) -> MonoidalComplex:
    """The irreducible complex Spec k[S] of the semigroup generated by ``generators``."""
    gens = [tuple(int(x) for x in g) for g in generators]
    d = len(gens[0])
    return validate(RawComplex(d, {"S": gens}, GENERATORS, semigroups={"S": gens}, characteristic=characteristic))
