"""
Residue signs and the signed incidences ε·d that drive orientability and
residue constants.

Every lattice carries the orientation of its HNF basis. For τ ≺ F and u in
Λ_F with ⟨e_{τ≺F}, u⟩ = 1, the determinant of (u, basis of Λ_τ) written in
the basis of Λ_F equals ε_{τ≺F}·d_{τ≺F}.
"""

from __future__ import annotations
from dataclasses import dataclass
from typing import Optional
import logging

from .cones import RationalCone, facet_functional
from .exactlat import OrientedBasis, Sublattice, Vector, signed_volume, solve_integral
from .exceptions import ConsistencyError, NoUnitPairing
from .mcomplex import MonoidalComplex, facet_graph

logger = logging.getLogger(__name__)


def unit_vector(F: RationalCone, tau: RationalCone, lattice: Sublattice) -> Vector:
    """Some u in ``lattice`` with ⟨e_{τ≺F}, u⟩ = 1."""
    e = facet_functional(F, tau, lattice)
    u = solve_integral([e], [1], lattice)
    if u is None:
        logger.error("no unit pairing for %s in %s", tau.id, F.id)
        raise NoUnitPairing(f"no u in {lattice.label()} pairs to 1 with the normal of {tau.id} in {F.id}")
    return u


def _signed_incidence(
    u: Vector,
    tau_basis: OrientedBasis,
    facet_basis: OrientedBasis,
) -> int:
    volume = signed_volume((u,) + tuple(tau_basis.vectors), facet_basis.sublattice)
    # orientation of the chosen facet basis against the canonical one
    return volume * signed_volume(facet_basis.vectors, facet_basis.sublattice)


def signed_incidence(
    mc: MonoidalComplex,
    tau: RationalCone,
    F: RationalCone,
    tau_basis: Optional[OrientedBasis] = None,
    facet_basis: Optional[OrientedBasis] = None,
) -> int:
    """ε_{τ≺F}·d_{τ≺F} as a signed integer."""
    lam_f = mc.lattice(F)
    tau_basis = tau_basis or OrientedBasis.canonical(mc.lattice(tau))
    facet_basis = facet_basis or OrientedBasis.canonical(lam_f)
    u = unit_vector(F, tau, lam_f)
    value = _signed_incidence(u, tau_basis, facet_basis)

    if tau_basis.vectors:
        shifted = tuple(a + b for a, b in zip(u, tau_basis.vectors[0]))
        if _signed_incidence(shifted, tau_basis, facet_basis) != value:
            logger.error("residue sign of %s in %s depends on u", tau.id, F.id)
            raise ConsistencyError(f"residue sign of {tau.id} in {F.id} depends on the choice of u")
    return value


def residue_sign(
    mc: MonoidalComplex,
    F: RationalCone,
    tau: RationalCone,
    tau_basis: Optional[OrientedBasis] = None,
    facet_basis: Optional[OrientedBasis] = None,
) -> int:
    return 1 if signed_incidence(mc, tau, F, tau_basis, facet_basis) > 0 else -1


@dataclass(frozen=True)
class Edge:
    source: RationalCone
    target: RationalCone
    shared: RationalCone
    source_incidence: int
    target_incidence: int


def signed_edges(mc: MonoidalComplex) -> list[Edge]:
    """Edges of the facet graph with the signed incidences on both ends."""
    out = []
    for F, G, tau in facet_graph(mc).edges:
        out.append(Edge(F, G, tau, signed_incidence(mc, tau, F), signed_incidence(mc, tau, G)))
    return out
