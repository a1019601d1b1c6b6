"""
Seminormality, weak normality and the S2 property of monoidal complexes,
together with the conductor fan, the core and the incidence numbers.

Complexes in lattice family mode are decided exactly. In generator mode the
semigroup conditions are checked on the lattice points of a box [-N, N]^d;
a negative answer always carries an exact witness point.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Optional, Sequence
import logging

from .cones import RationalCone, face_of_relint, faces, sort_key
from .conf import get_setting
from .exactlat import (
    Vector,
    integer_combination,
    lattice_intersect,
    restrict_to_span,
    sublattice_index,
)
from .exceptions import ConsistencyError, NotIrreducible, PreconditionFailed
from .mcomplex import (
    GENERATORS,
    AffineSemigroup,
    MonoidalComplex,
    is_1_connected,
)

logger = logging.getLogger(__name__)

EXACT = "exact"
BOX_BOUNDED = "box-bounded"


@dataclass(frozen=True)
class Verdict:
    value: bool
    witness: Any = None
    provenance: str = EXACT
    box: Optional[int] = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.value

    def as_dict(self) -> dict:
        out = {"value": self.value, "witness": self.witness, "provenance": self.provenance}
        if self.box is not None:
            out["box"] = self.box
        if self.note:
            out["note"] = self.note
        return out


def verification_box(mc: MonoidalComplex, box: Optional[int] = None) -> int:
    """
    Half width N of the verification box. Defaults to
    (number of generators) * (largest coordinate) * 2.
    """
    if box is None:
        box = get_setting("DEFAULT_BOX")
    if box is not None:
        return int(box)
    gens = {g for F in mc.facets for g in mc.semigroup_generators(F)}
    largest = max((abs(x) for g in gens for x in g), default=1)
    return max(1, len(gens) * largest * 2)


def _box_points(d: int, n: int) -> list[Vector]:
    points = sorted(product(range(-n, n + 1), repeat=d), key=lambda p: (sum(map(abs, p)), p))
    logger.debug("verification box [-%d, %d]^%d has %d points", n, n, d, len(points))
    return points


# -- incidence numbers -----------------------------------------------------

def incidence_table(mc: MonoidalComplex) -> dict[tuple[RationalCone, RationalCone], int]:
    """d_{τ≺F} = [Λ_F ∩ span τ : Λ_τ] for every codimension one face τ of a facet F."""
    table = {}
    for tau, F in mc.codim_one_pairs():
        table[(tau, F)] = sublattice_index(mc.lattice(tau), restrict_to_span(mc.lattice(F), tau.span))
    return table


# -- seminormality ---------------------------------------------------------

def is_seminormal(mc: MonoidalComplex, box: Optional[int] = None) -> Verdict:
    if mc.mode != GENERATORS:
        return Verdict(True, note="lattice family complexes are seminormal")

    n = verification_box(mc, box)
    lattices = {c: mc.lattice(c) for c in mc.cones}
    for p in _box_points(mc.ambient_rank, n):
        for F in mc.facets:
            sigma = face_of_relint(faces(F), p)
            if sigma is None:
                continue
            if p in lattices[sigma] and p not in mc.semigroup(F):
                return Verdict(False, {"point": list(p), "cone": mc.name(sigma)})
            break
    logger.info("seminormality verified up to box %d", n)
    return Verdict(True, provenance=BOX_BOUNDED, box=n, note=f"verified up to box {n}")


def is_weakly_normal(mc: MonoidalComplex, box: Optional[int] = None) -> Verdict:
    seminormal = is_seminormal(mc, box)
    if not seminormal:
        return Verdict(False, {"reason": "not seminormal", **seminormal.witness}, EXACT)
    p = mc.characteristic
    if p:
        for (tau, F), d in incidence_table(mc).items():
            if d % p == 0:
                return Verdict(False, {"prime": mc.name(tau), "facet": mc.name(F), "incidence": d})
    return Verdict(True, provenance=seminormal.provenance, box=seminormal.box, note=seminormal.note)


# -- S2 closure -------------------------------------------------------------

class S2Closure:
    """
    Membership oracle for S' = ∩_i (S − S∩τ_i), τ_i the codimension one
    faces of the cone of S.
    """

    def __init__(self, mc: MonoidalComplex, facet: RationalCone):
        self.complex = mc
        self.facet = facet
        self.ambient_rank = mc.ambient_rank
        gens = mc.semigroup_generators(facet)
        self.primes = tuple(faces(facet).facets)
        self._pieces = {}
        self._face_gens = {}
        for tau in self.primes:
            on_tau = [g for g in gens if tau.contains(g)]
            self._face_gens[tau] = on_tau
            self._pieces[tau] = AffineSemigroup(
                self.ambient_rank, list(gens) + [tuple(-x for x in g) for g in on_tau]
            )

    def __contains__(self, m: Sequence) -> bool:
        return all(m in piece for piece in self._pieces.values())

    def witness(self, m: Sequence) -> Optional[dict]:
        """For every τ_i a pair (s, t), s ∈ S and t ∈ S∩τ_i, with m = s − t."""
        out = {}
        for tau, piece in self._pieces.items():
            found = piece.decompose(m)
            if found is None:
                return None
            used, rest = found
            on_tau = self._face_gens[tau]
            coeffs = integer_combination(on_tau, rest)
            plus = [sum(max(c, 0) * g[i] for c, g in zip(coeffs, on_tau)) for i in range(self.ambient_rank)]
            t = tuple(sum(max(-c, 0) * g[i] for c, g in zip(coeffs, on_tau)) for i in range(self.ambient_rank))
            s = tuple(sum(g[i] for g in used) + plus[i] for i in range(self.ambient_rank))
            out[self.complex.name(tau)] = (s, t)
        return out

    def points(self, box: int) -> list[Vector]:
        """Elements of S' inside [-box, box]^d."""
        return [p for p in _box_points(self.ambient_rank, box) if self.facet.contains(p) and p in self]


def s2_closure_irreducible(mc: MonoidalComplex) -> S2Closure:
    if len(mc.facets) != 1:
        raise NotIrreducible(f"complex has {len(mc.facets)} facets")
    if mc.mode != GENERATORS:
        raise PreconditionFailed("the S2 closure oracle needs semigroup generators")
    return S2Closure(mc, mc.facets[0])


# -- S2 ---------------------------------------------------------------------

def is_s2(mc: MonoidalComplex, box: Optional[int] = None) -> Verdict:
    connectivity = is_1_connected(mc)
    if not connectivity.connected:
        F, G = connectivity.failing_pair
        return Verdict(False, {"reason": "not 1-connected", "facets": [mc.name(F), mc.name(G)]})

    if mc.mode != GENERATORS:
        primes = mc.primes()
        for sigma in mc.cones:
            if mc.is_facet(sigma):
                continue
            above = [tau for tau in primes if tau != sigma and tau.contains_cone(sigma)]
            if not above:
                continue
            meet = mc.lattice(above[0])
            for tau in above[1:]:
                meet = lattice_intersect(meet, mc.lattice(tau))
            if meet != mc.lattice(sigma):
                return Verdict(False, {
                    "reason": "lattice is not the intersection of the codimension one lattices",
                    "cone": mc.name(sigma),
                    "lattice": mc.lattice(sigma).label(),
                    "intersection": meet.label(),
                })
        return Verdict(True)

    n = verification_box(mc, box)
    closures = {F: S2Closure(mc, F) for F in mc.facets}
    for p in _box_points(mc.ambient_rank, n):
        containing = [F for F in mc.facets if F.contains(p)]
        if not containing:
            continue
        in_s = p in mc.semigroup(containing[0])
        in_closure = all(p in closures[F] for F in containing)
        if in_s != in_closure:
            return Verdict(False, {"point": list(p), "in_semigroup": in_s, "in_closures": in_closure})
    logger.info("S2 condition verified up to box %d", n)
    return Verdict(True, provenance=BOX_BOUNDED, box=n, note=f"verified up to box {n}")


# -- conductor and core -----------------------------------------------------

def _lattice_mode(mc: MonoidalComplex) -> MonoidalComplex:
    if mc.mode != GENERATORS:
        return mc
    if not is_seminormal(mc):
        raise PreconditionFailed("generator mode complex is not seminormal; seminormalize first")
    return mc.as_lattice_family()


def conductor_fan(mc: MonoidalComplex) -> tuple[RationalCone, ...]:
    """Cones of the non-normal locus, closed under taking faces."""
    mc = _lattice_mode(mc)
    chosen = set()
    for sigma in mc.cones:
        above = mc.facets_containing(sigma)
        if len(above) >= 2:
            chosen.add(sigma)
        elif mc.lattice(sigma) != restrict_to_span(mc.lattice(above[0]), sigma.span):
            chosen.add(sigma)
    closure = {f for c in chosen for f in faces(c).faces}
    return tuple(sorted(closure, key=sort_key))


def normal_failure(mc: MonoidalComplex, facet: RationalCone) -> Optional[RationalCone]:
    """A face ρ of ``facet`` with Λ_ρ ≠ Λ_facet ∩ span ρ, or None when X_facet is normal."""
    top = mc.lattice(facet)
    for rho in faces(facet).faces:
        if mc.lattice(rho) != restrict_to_span(top, rho.span):
            return rho
    return None


@dataclass(frozen=True)
class Core:
    cone: RationalCone
    lattice: Any
    certificate: list = field(default_factory=list)


def core(mc: MonoidalComplex) -> Core:
    if not is_seminormal(mc) or not is_s2(mc):
        raise PreconditionFailed("the core is defined for seminormal S2 complexes")
    mc = _lattice_mode(mc)
    conductor = set(conductor_fan(mc))
    cut = list(mc.facets) + [tau for tau in mc.primes() if tau in conductor]
    inside = [c for c in mc.cones if all(o.contains_cone(c) for o in cut)]
    sigma = min(inside, key=sort_key)

    top = mc.lattice(sigma)
    certificate = []
    for rho in faces(sigma).faces:
        expected = restrict_to_span(top, rho.span)
        if mc.lattice(rho) != expected:
            logger.error("core %s is not normal at %s", sigma.id, rho.id)
            raise ConsistencyError(f"core {sigma.id} fails normality at {rho.id}")
        certificate.append({"face": mc.name(rho), "lattice": expected.label()})
    return Core(sigma, top, certificate)


# -- summaries --------------------------------------------------------------

def normalization(mc: MonoidalComplex) -> list[dict]:
    out = []
    for F in mc.facets:
        lat = mc.lattice(F)
        failure = normal_failure(mc, F)
        out.append({
            "facet": mc.name(F),
            "saturated_lattice": F.span.label(),
            "lattice": lat.label(),
            "lattice_saturated": lat.is_saturated(),
            "normal": failure is None,
            "non_normal_face": None if failure is None else mc.name(failure),
        })
    return out


@dataclass(frozen=True)
class NormalityReport:
    seminormal: Verdict
    weakly_normal: Verdict
    s2: Verdict
    has_normal_components: bool
    mode: str

    def as_dict(self) -> dict:
        return {
            "seminormal": self.seminormal.as_dict(),
            "weakly_normal": self.weakly_normal.as_dict(),
            "s2": self.s2.as_dict(),
            "has_normal_components": self.has_normal_components,
            "verdict_mode": self.mode,
        }


def normality_report(mc: MonoidalComplex, box: Optional[int] = None) -> NormalityReport:
    seminormal = is_seminormal(mc, box)
    weakly_normal = is_weakly_normal(mc, box)
    s2 = is_s2(mc, box)
    normal = seminormal.value and all(entry["normal"] for entry in normalization(mc))
    verdicts = (seminormal, weakly_normal, s2)
    mode = BOX_BOUNDED if any(v.provenance == BOX_BOUNDED for v in verdicts) else EXACT
    return NormalityReport(seminormal, weakly_normal, s2, normal, mode)
