"""
Toric log pairs on monoidal complexes.

A boundary B lives on the invariant primes at which X is smooth. Together
with the conductor it determines the log discrepancy function ψ, a rational
vector with ⟨e_{τ≺F}, ψ⟩ = 1 − mult over every facet F and every
codimension one face τ of F. Classification into weakly normal log pairs,
wlc and slc singularities reads off ψ, the boundary coefficients and the
orientability of the facet graph.
"""

from __future__ import annotations
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Any, Iterable, Mapping, Optional, Sequence
import logging

from .cones import RationalCone, face_of_relint, facet_functional, faces, sort_key
from .conf import get_setting
from .exactlat import Sublattice, Vector, primitive, restrict_to_span, solve_integral, solve_rational
from .exceptions import (
    BoundaryError,
    ConsistencyError,
    Infeasible,
    NoUnitPairing,
    NotWlc,
    PreconditionFailed,
    ValidationError,
)
from .mcomplex import MonoidalComplex
from .normality import conductor_fan, core, incidence_table, is_s2, is_weakly_normal, normality_report
from .orientation import Edge, signed_edges
from .scalars import common_order, units_for

logger = logging.getLogger(__name__)


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- boundaries ---------------------------------------------------------------

@dataclass(frozen=True)
class Boundary:
    coefficients: tuple[tuple[RationalCone, Fraction], ...] = ()

    def coefficient(self, tau: RationalCone) -> Fraction:
        return dict(self.coefficients).get(tau, Fraction(0))

    def items(self) -> list[tuple[RationalCone, Fraction]]:
        return list(self.coefficients)

    def is_effective(self) -> bool:
        return all(b >= 0 for _, b in self.coefficients)

    def scaled(self, r: int) -> Boundary:
        return Boundary(tuple((tau, b * r) for tau, b in self.coefficients))

    def as_dict(self, mc: MonoidalComplex) -> dict[str, str]:
        return {mc.name(tau): format_rational(b) for tau, b in self.coefficients if b}


def smooth_primes(mc: MonoidalComplex) -> list[RationalCone]:
    """Invariant primes at which X is smooth: one facet and incidence number 1."""
    table = incidence_table(mc)
    out = []
    for tau in mc.primes():
        above = mc.facets_containing(tau)
        if len(above) == 1 and table.get((tau, above[0])) == 1:
            out.append(tau)
    return out


def conductor_primes(mc: MonoidalComplex) -> list[RationalCone]:
    conductor = set(conductor_fan(mc))
    return [tau for tau in mc.primes() if tau in conductor]


def make_boundary(mc: MonoidalComplex, entries: Mapping[Any, Any]) -> Boundary:
    """Boundary from {cone or cone reference: coefficient}; zero entries are dropped."""
    smooth = set(smooth_primes(mc))
    coefficients = {}
    for ref, value in entries.items():
        try:
            tau = mc.cone(ref)
        except KeyError as exc:
            raise BoundaryError(f"boundary names unknown cone {ref!r}", field=str(ref)) from exc
        if tau not in smooth:
            raise BoundaryError(
                f"boundary entry on {mc.name(tau)}, which is not a smooth invariant prime",
                field=str(ref),
            )
        b = Fraction(value)
        if b:
            coefficients[tau] = b
    return Boundary(tuple(sorted(coefficients.items(), key=lambda kv: sort_key(kv[0]))))


def toric_boundary_minus_conductor(mc: MonoidalComplex) -> Boundary:
    """Σ_X − C_X: every smooth invariant prime with coefficient 1."""
    return Boundary(tuple((tau, Fraction(1)) for tau in smooth_primes(mc)))


# -- the log discrepancy function --------------------------------------------

@dataclass(frozen=True)
class Equation:
    facet: RationalCone
    prime: RationalCone
    functional: tuple[Fraction, ...]
    multiplicity: Fraction

    @property
    def rhs(self) -> Fraction:
        return 1 - self.multiplicity


def psi_equations(mc: MonoidalComplex, boundary: Boundary) -> list[Equation]:
    conductor = set(conductor_primes(mc))
    out = []
    for tau, F in mc.codim_one_pairs():
        mult = Fraction(1) if tau in conductor else boundary.coefficient(tau)
        out.append(Equation(F, tau, facet_functional(F, tau, mc.lattice(F)), mult))
    return out


@dataclass(frozen=True)
class LogDiscrepancy:
    psi: tuple[Fraction, ...]
    residue_lattice: Sublattice

    def as_dict(self) -> dict:
        return {
            "psi": [format_rational(x) for x in self.psi],
            "residue_lattice": self.residue_lattice.label(),
        }


def _consistent(rows, rhs, k) -> bool:
    return solve_rational(rows, rhs, k) is not None


def _minimal_inconsistent(rows: list, rhs: list, k: int) -> list[int]:
    keep = list(range(len(rows)))
    for i in range(len(rows)):
        trial = [j for j in keep if j != i]
        if not _consistent([rows[j] for j in trial], [rhs[j] for j in trial], k):
            keep = trial
    return keep


def solve_psi(mc: MonoidalComplex, boundary: Boundary) -> LogDiscrepancy:
    """
    Solve the facet equations for ψ inside the span of the core lattice.
    Free coordinates are set to zero, which picks a canonical solution.
    """
    mc = mc.as_lattice_family()
    lattice = core(mc).lattice
    basis = lattice.basis
    k = len(basis)
    equations = psi_equations(mc, boundary)
    rows = [[sum(a * b for a, b in zip(eq.functional, c)) for c in basis] for eq in equations]
    rhs = [eq.rhs for eq in equations]

    t = solve_rational(rows, rhs, k)
    if t is None:
        bad = _minimal_inconsistent(rows, rhs, k)
        certificate = [
            {"facet": mc.name(equations[i].facet), "prime": mc.name(equations[i].prime),
             "rhs": format_rational(rhs[i])}
            for i in bad
        ]
        raise Infeasible("the log discrepancy equations are inconsistent", certificate)

    psi = tuple(sum((ti * c[j] for ti, c in zip(t, basis)), Fraction(0)) for j in range(mc.ambient_rank))
    for eq in equations:
        if sum(a * b for a, b in zip(eq.functional, psi)) != eq.rhs:
            logger.error("psi %s fails the equation of %s in %s", psi, eq.prime.id, eq.facet.id)
            raise ConsistencyError("log discrepancy function does not solve its equations")
    return LogDiscrepancy(psi, lattice)


def log_discrepancy(psi: Sequence, e: Sequence[int]) -> Fraction:
    """⟨e, ψ⟩ for a primitive integer vector e."""
    e = tuple(int(x) for x in e)
    if not any(e) or primitive(e) != e:
        raise ValidationError(f"{list(e)} is not a primitive integer vector")
    return sum((Fraction(a) * Fraction(b) for a, b in zip(e, psi)), Fraction(0))


# -- orientability ------------------------------------------------------------

@dataclass(frozen=True)
class Cycle:
    facets: tuple[RationalCone, ...]
    closing_edge: Edge
    product: Fraction


def _edge_weight(edge: Edge, forward: bool) -> Fraction:
    if forward:
        return Fraction(edge.target_incidence, edge.source_incidence)
    return Fraction(edge.source_incidence, edge.target_incidence)


def _tree_path(parent: dict, F) -> list:
    path = []
    while F is not None:
        path.append(F)
        F = parent[F]
    return path[::-1]


def fundamental_cycles(mc: MonoidalComplex, root: Optional[RationalCone] = None, strategy: str = "bfs"):
    """
    Potentials from a spanning tree of the facet graph and the cycles closed by
    the remaining edges. Returns (potential, parent, tree edges, cycles).
    """
    edges = signed_edges(mc)
    incident: dict[RationalCone, list[tuple[Edge, bool]]] = {F: [] for F in mc.facets}
    for edge in edges:
        incident[edge.source].append((edge, True))
        incident[edge.target].append((edge, False))

    order = list(mc.facets)
    if root is not None:
        order.remove(root)
        order.insert(0, root)

    potential: dict[RationalCone, Fraction] = {}
    parent: dict[RationalCone, Optional[RationalCone]] = {}
    tree: set[int] = set()
    for start in order:
        if start in potential:
            continue
        potential[start] = Fraction(1)
        parent[start] = None
        pending = deque([start])
        while pending:
            F = pending.popleft() if strategy == "bfs" else pending.pop()
            for edge, forward in incident[F]:
                G = edge.target if forward else edge.source
                if G in potential:
                    continue
                potential[G] = potential[F] * _edge_weight(edge, forward)
                parent[G] = F
                tree.add(id(edge))
                pending.append(G)
    logger.debug("spanning tree from %s (%s): %d tree edges", order[0].id, strategy, len(tree))

    cycles = []
    for edge in edges:
        if id(edge) in tree:
            continue
        product = potential[edge.source] * _edge_weight(edge, True) / potential[edge.target]
        left, right = _tree_path(parent, edge.source), _tree_path(parent, edge.target)
        while len(left) > 1 and len(right) > 1 and left[1] == right[1]:
            left, right = left[1:], right[1:]
        facets = tuple(right[::-1][:-1] + left) + (edge.target,)
        cycles.append(Cycle(facets, edge, product))
    tree_edges = [e for e in edges if id(e) in tree]
    return potential, parent, tree_edges, cycles


def _cycle_witness(mc: MonoidalComplex, cycle: Cycle, units, n: Optional[int] = None) -> dict:
    out = {
        "cycle": [mc.name(F) for F in cycle.facets],
        "shared": mc.name(cycle.closing_edge.shared),
        "product": format_rational(cycle.product),
    }
    if n is not None:
        try:
            out["power"] = units.as_json(units.power(cycle.product, n))
        except NoUnitPairing:
            out["power"] = None
    return out


@dataclass(frozen=True)
class Orientability:
    value: bool
    n: Optional[int] = None
    exponent: Optional[int] = None
    witness: Optional[dict] = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.value

    def as_dict(self) -> dict:
        out = {"value": self.value, "witness": self.witness}
        if self.n is not None:
            out["n"] = self.n
        if self.exponent is not None:
            out["exponent"] = self.exponent
        if self.note:
            out["note"] = self.note
        return out


def is_n_orientable(mc: MonoidalComplex, n: int) -> Orientability:
    mc = mc.as_lattice_family()
    units = units_for(mc.characteristic)
    note = "" if n % 2 == 0 else "odd n: signs taken from the canonical orientations"
    for cycle in fundamental_cycles(mc)[3]:
        try:
            ok = units.is_one(units.power(cycle.product, n))
        except NoUnitPairing:
            ok = False
        if not ok:
            return Orientability(False, n, witness=_cycle_witness(mc, cycle, units, n), note=note)
    return Orientability(True, n, note=note)


def q_orientability(mc: MonoidalComplex) -> Orientability:
    """Whether X is n-orientable for some n, with the least such n."""
    mc = mc.as_lattice_family()
    units = units_for(mc.characteristic)
    cycles = fundamental_cycles(mc)[3]
    for cycle in cycles:
        try:
            order = units.order(cycle.product)
        except NoUnitPairing:
            order = None
        if order is None:
            return Orientability(False, witness=_cycle_witness(mc, cycle, units))
    return Orientability(True, exponent=common_order(units, [c.product for c in cycles]))


# -- classification -----------------------------------------------------------

def invertibility_orders(mc: MonoidalComplex, boundary: Boundary, n_max: Optional[int] = None) -> list[int]:
    """The n in [1, n_max] with ω^{[n]} ≅ O_X."""
    mc = mc.as_lattice_family()
    n_max = n_max if n_max is not None else get_setting("NMAX")
    lattice = core(mc).lattice
    equations = psi_equations(mc, boundary)
    conductor = set(conductor_primes(mc))
    rows = [eq.functional for eq in equations]

    out = []
    for n in range(1, n_max + 1):
        if not is_n_orientable(mc, n):
            continue
        rhs = [0 if eq.prime in conductor else ceil(n * eq.rhs) for eq in equations]
        if solve_integral(rows, rhs, lattice) is not None:
            out.append(n)
    return out


def _nodal_failure(mc: MonoidalComplex, table: dict) -> Optional[dict]:
    for tau in mc.primes():
        above = mc.facets_containing(tau)
        incidences = [table[(tau, F)] for F in above]
        if len(above) == 1 and 2 % incidences[0] == 0:
            continue
        if len(above) == 2 and incidences == [1, 1]:
            continue
        return {"prime": mc.name(tau), "facets": [mc.name(F) for F in above], "incidences": incidences}
    return None


@dataclass
class ClassificationReport:
    boundary: Boundary
    is_weakly_normal_log_pair: bool
    psi: Optional[LogDiscrepancy]
    q_orientable: Orientability
    is_wlc: bool
    is_slc: bool
    invertibility_orders: list[int]
    non_wlc_locus: list[RationalCone]
    witnesses: dict = field(default_factory=dict)
    evaluations: list[tuple[Vector, Fraction]] = field(default_factory=list)

    def as_dict(self, mc: MonoidalComplex) -> dict:
        out = {
            "boundary": self.boundary.as_dict(mc),
            "is_weakly_normal_log_pair": self.is_weakly_normal_log_pair,
            "psi": self.psi.as_dict() if self.psi else None,
            "q_orientable": self.q_orientable.as_dict(),
            "is_wlc": self.is_wlc,
            "is_slc": self.is_slc,
            "invertibility_orders": self.invertibility_orders,
            "non_wlc_locus": [mc.name(tau) for tau in self.non_wlc_locus],
            "witnesses": self.witnesses,
        }
        if self.evaluations:
            out["evaluations"] = [
                {"e": list(e), "value": format_rational(v)} for e, v in self.evaluations
            ]
        return out


def check_preconditions(mc: MonoidalComplex, box: Optional[int] = None) -> MonoidalComplex:
    """Seminormal, S2 and weakly normal; returns the lattice family form."""
    report = normality_report(mc, box)
    for name in ("seminormal", "s2", "weakly_normal"):
        verdict = getattr(report, name)
        if not verdict:
            raise PreconditionFailed(f"complex is not {name.replace('_', ' ')}", verdict=verdict.as_dict())
    return mc.as_lattice_family()


def classify(
    mc: MonoidalComplex,
    boundary: Optional[Any] = None,
    n_max: Optional[int] = None,
    evaluations: Iterable[Sequence[int]] = (),
    box: Optional[int] = None,
) -> ClassificationReport:
    mc = check_preconditions(mc, box)
    if not isinstance(boundary, Boundary):
        boundary = make_boundary(mc, boundary or {})
    logger.info("classifying complex with %d facets", len(mc.facets))

    orientable = q_orientability(mc)
    witnesses = {}
    try:
        psi = solve_psi(mc, boundary)
    except Infeasible as exc:
        psi = None
        witnesses["psi"] = exc.certificate
    if not orientable:
        witnesses["orientability"] = orientable.witness

    log_pair = psi is not None and orientable.value
    non_wlc = [tau for tau, b in boundary.items() if b > 1]
    wlc = log_pair and not non_wlc
    if log_pair:
        inside = all(F.contains(psi.psi) for F in mc.facets)
        if inside != (not non_wlc):
            logger.error("psi in every facet is %s but the boundary says %s", inside, not non_wlc)
            raise ConsistencyError("wlc verdicts from ψ and from the boundary disagree")
    if non_wlc:
        witnesses["wlc"] = {"coefficients_above_one": [mc.name(tau) for tau in non_wlc]}

    slc = False
    if wlc:
        failure = _nodal_failure(mc, incidence_table(mc))
        slc = failure is None
        if failure:
            witnesses["slc"] = failure

    orders = invertibility_orders(mc, boundary, n_max) if log_pair else []
    values = [(tuple(e), log_discrepancy(psi.psi, e)) for e in evaluations] if psi else []
    return ClassificationReport(
        boundary, log_pair, psi, orientable, wlc, slc, orders, non_wlc, witnesses, values
    )


# -- lc centers ------------------------------------------------------------------

def lc_centers(mc: MonoidalComplex, boundary: Boundary, psi: Sequence) -> list[RationalCone]:
    bad = [tau for tau, b in boundary.items() if b > 1]
    out = [
        sigma for sigma in mc.cones
        if sigma.contains(psi) and not any(tau.contains_cone(sigma) for tau in bad)
    ]
    return sorted(out, key=sort_key)


def require_wlc(mc: MonoidalComplex, boundary: Boundary, psi: Optional[Sequence]) -> None:
    if psi is None:
        raise NotWlc("no log discrepancy function")
    above = [mc.name(tau) for tau, b in boundary.items() if b > 1]
    if above:
        raise NotWlc(f"boundary coefficients above 1 on {', '.join(above)}")
    outside = [mc.name(F) for F in mc.facets if not F.contains(psi)]
    if outside:
        raise NotWlc(f"ψ lies outside {', '.join(outside)}")
    orientable = q_orientability(mc)
    if not orientable:
        raise NotWlc("X is not Q-orientable", witness=orientable.witness)


@dataclass(frozen=True)
class MinimalCenter:
    cone: RationalCone
    certificate: list


def minimal_lc_center(mc: MonoidalComplex, boundary: Boundary, psi: Sequence) -> MinimalCenter:
    mc = mc.as_lattice_family()
    require_wlc(mc, boundary, psi)
    sigma = face_of_relint(faces(mc.facets[0]), psi)
    top = mc.lattice(sigma)
    certificate = []
    for rho in faces(sigma).faces:
        expected = restrict_to_span(top, rho.span)
        if mc.lattice(rho) != expected:
            logger.error("minimal lc center %s is not normal at %s", sigma.id, rho.id)
            raise ConsistencyError(f"minimal lc center {sigma.id} is not normal at {rho.id}")
        certificate.append({"face": mc.name(rho), "lattice": expected.label()})
    return MinimalCenter(sigma, certificate)


@dataclass
class LcsLocus:
    complex: Optional[MonoidalComplex]
    centers: list[RationalCone]
    report: dict = field(default_factory=dict)


def lcs_locus(mc: MonoidalComplex, boundary: Boundary, psi: Sequence) -> LcsLocus:
    """The union Y of the lc centers of positive codimension."""
    mc = mc.as_lattice_family()
    require_wlc(mc, boundary, psi)
    centers = [c for c in lc_centers(mc, boundary, psi) if not mc.is_facet(c)]
    Y = mc.restrict(centers)
    if Y is None:
        return LcsLocus(None, [], {"empty": True})
    primes = set(mc.primes())
    report = {
        "empty": False,
        "s2": is_s2(Y).as_dict(),
        "weakly_normal": is_weakly_normal(Y).as_dict(),
        "pure_codimension_one": all(G in primes for G in Y.facets),
    }
    return LcsLocus(Y, centers, report)
