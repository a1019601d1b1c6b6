"""
Residues on weakly log canonical monoidal complexes.

Codimension one residues glue along the facet graph through the constants
c_F and c_i; differents describe the boundary induced on an lc center;
iterating residue and different walks down the chain of LCS loci.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence
import logging

from .cones import RationalCone, facet_functional, faces, sort_key
from .conf import get_setting
from .exactlat import dot, restrict_to_span, sublattice_index
from .exceptions import (
    ConsistencyError,
    GlueCheckFailed,
    InconsistentDifferent,
    NotAnLcCenter,
    NotNormalComponents,
    NotOrientable,
    PreconditionFailed,
    ValidationError,
)
from .logpair import (
    Boundary,
    conductor_primes,
    format_rational,
    fundamental_cycles,
    invertibility_orders,
    is_n_orientable,
    lc_centers,
    lcs_locus,
    make_boundary,
    psi_equations,
    require_wlc,
    smooth_primes,
    solve_psi,
)
from .mcomplex import MonoidalComplex
from .normality import conductor_fan, is_s2, is_weakly_normal, normalization
from .orientation import residue_sign, signed_incidence
from .scalars import units_for

logger = logging.getLogger(__name__)


def _check_r(r: Optional[int]) -> int:
    r = get_setting("R") if r is None else int(r)
    if r <= 0 or r % 2:
        raise ValidationError(f"r must be a positive even integer, got {r}")
    return r


# -- differents -----------------------------------------------------------------

@dataclass(frozen=True)
class Different:
    center: RationalCone
    coefficients: tuple[tuple[RationalCone, Fraction], ...]

    def coefficient(self, Q: RationalCone) -> Fraction:
        return dict(self.coefficients)[Q]

    def as_dict(self, mc: MonoidalComplex) -> dict:
        return {
            "center": mc.name(self.center),
            "coefficients": {mc.name(Q): format_rational(m) for Q, m in self.coefficients},
        }


def _ramification(upper: RationalCone, upper_face: RationalCone, lower: RationalCone,
                  lower_face: RationalCone, mc: MonoidalComplex) -> Fraction:
    """q with e_{upper_face ≺ upper} = q·e_{lower_face ≺ lower} on the span of ``lower``."""
    e_upper = facet_functional(upper, upper_face, mc.lattice(upper))
    e_lower = facet_functional(lower, lower_face, mc.lattice(lower))
    point = next(g for g in lower.cone_generators if dot(e_lower, g) > 0)
    return Fraction(dot(e_upper, point)) / Fraction(dot(e_lower, point))


def _other_face(F: RationalCone, tau: RationalCone, Q: RationalCone) -> RationalCone:
    """The codimension one face of F other than τ that contains Q."""
    others = [T for T in faces(F).facets if T != tau and T.contains_cone(Q)]
    if len(others) != 1:
        raise ConsistencyError(f"{Q.id} does not sit in exactly two facets of {F.id}")
    return others[0]


def _step_different(mc: MonoidalComplex, upper: RationalCone, lower: RationalCone,
                    coefficients: dict) -> dict:
    """Adjunction from ``upper`` with boundary ``coefficients`` to its codimension one face ``lower``."""
    out = {}
    for Q in faces(lower).facets:
        T = _other_face(upper, lower, Q)
        q = _ramification(upper, T, lower, Q, mc)
        out[Q] = 1 - (1 - coefficients[T]) / q
    return out


def _psi_different(mc: MonoidalComplex, center: RationalCone, psi: Sequence) -> dict:
    lattice = mc.lattice(center)
    return {
        Q: 1 - sum(a * Fraction(b) for a, b in zip(facet_functional(center, Q, lattice), psi))
        for Q in faces(center).facets
    }


def different(mc: MonoidalComplex, boundary: Boundary, psi: Sequence, tau: Any) -> Different:
    mc = mc.as_lattice_family()
    tau = mc.cone(tau)
    if tau not in mc.primes() or tau not in lc_centers(mc, boundary, psi):
        raise NotAnLcCenter(f"{mc.name(tau)} is not a codimension one lc center")

    conductor = set(conductor_primes(mc))
    coefficient = {T: Fraction(1) if T in conductor else boundary.coefficient(T) for T in mc.primes()}
    result = None
    for F in mc.facets_containing(tau):
        found = _step_different(mc, F, tau, coefficient)
        if result is not None and found != result:
            logger.error("differents on %s disagree between facets", tau.id)
            raise InconsistentDifferent(f"facets through {mc.name(tau)} induce different differents")
        result = found

    expected = _psi_different(mc, tau, psi)
    if expected != result:
        logger.error("different on %s does not match psi: %s vs %s", tau.id, result, expected)
        raise InconsistentDifferent(f"different on {mc.name(tau)} disagrees with ψ")
    return Different(tau, tuple(sorted(result.items(), key=lambda kv: sort_key(kv[0]))))


# -- residue constants --------------------------------------------------------------

@dataclass
class ResidueDatum:
    r: int
    characteristic: int
    root: RationalCone
    constants_facets: dict
    constants_primes: dict
    psi: tuple
    signs: dict
    incidences: dict = field(default_factory=dict)

    def as_dict(self, mc: MonoidalComplex) -> dict:
        units = units_for(self.characteristic)
        return {
            "r": self.r,
            "root": mc.name(self.root),
            "psi": [format_rational(x) for x in self.psi],
            "constants_facets": {mc.name(F): units.as_json(c) for F, c in self.constants_facets.items()},
            "constants_primes": {mc.name(t): units.as_json(c) for t, c in self.constants_primes.items()},
            "signs": {f"{mc.name(t)} < {mc.name(F)}": s for (t, F), s in self.signs.items()},
        }


def require_invertible(mc: MonoidalComplex, boundary: Boundary, r: int) -> None:
    """Raise unless ω^{[r]} of (X, B) is trivial."""
    orientable = is_n_orientable(mc, r)
    if not orientable:
        raise NotOrientable(f"X is not {r}-orientable", witness=orientable.witness)
    orders = invertibility_orders(mc, boundary, r)
    if r not in orders:
        raise PreconditionFailed(f"ω^[{r}] is not invertible", orders=orders)


def residue_constants(
    mc: MonoidalComplex,
    boundary: Boundary,
    psi: Sequence,
    r: Optional[int] = None,
    root: Optional[Any] = None,
    strategy: str = "bfs",
) -> ResidueDatum:
    r = _check_r(r)
    mc = mc.as_lattice_family()
    require_invertible(mc, boundary, r)
    return _residue_constants(mc, boundary, psi, r, root, strategy)


def _residue_constants(mc, boundary, psi, r, root=None, strategy="bfs") -> ResidueDatum:
    units = units_for(mc.characteristic)
    root = mc.cone(root) if root is not None else mc.facets[0]
    potential, _, _, _ = fundamental_cycles(mc, root, strategy)

    incidences = {(tau, F): signed_incidence(mc, tau, F) for tau, F in mc.codim_one_pairs()}
    e = {key: units.power(Fraction(v), r) for key, v in incidences.items()}
    c_facets = {F: units.power(potential[F], r) for F in mc.facets}

    for tau, F in mc.codim_one_pairs():
        for G in mc.facets_containing(tau):
            if G == F or (tau, G) not in e:
                continue
            lhs = units.mul(c_facets[G], e[(tau, F)])
            rhs = units.mul(c_facets[F], e[(tau, G)])
            if lhs != rhs:
                raise NotOrientable(
                    f"residue constants of {mc.name(F)} and {mc.name(G)} disagree across {mc.name(tau)}",
                    facets=[mc.name(F), mc.name(G)],
                )

    centers = [tau for tau in lc_centers(mc, boundary, psi) if tau in mc.primes()]
    c_primes = {}
    for tau in centers:
        above = [G for G in mc.facets_containing(tau) if (tau, G) in e]
        c_primes[tau] = units.mul(c_facets[above[0]], units.inv(e[(tau, above[0])]))
        for G in above:
            if units.mul(c_primes[tau], e[(tau, G)]) != c_facets[G]:
                raise NotOrientable(f"c_F = c_i (ε d)^r fails for {mc.name(tau)} in {mc.name(G)}")

    signs = {(tau, F): residue_sign(mc, F, tau) for tau, F in mc.codim_one_pairs()}
    return ResidueDatum(
        r, mc.characteristic, root, c_facets, c_primes,
        tuple(Fraction(x) for x in psi), signs, incidences,
    )


# -- LCS gluing -------------------------------------------------------------------

@dataclass(frozen=True)
class GlueCheck:
    value: bool
    witness: Optional[dict] = None

    def __bool__(self) -> bool:
        return self.value

    def as_dict(self) -> dict:
        return {"value": self.value, "witness": self.witness}


def _index(mc: MonoidalComplex, small: RationalCone, big: RationalCone) -> int:
    return sublattice_index(mc.lattice(small), restrict_to_span(mc.lattice(big), small.span))


def lcs_glue_check(mc: MonoidalComplex, boundary: Boundary, psi: Sequence, r: Optional[int] = None) -> GlueCheck:
    r = _check_r(r)
    mc = mc.as_lattice_family()
    locus = lcs_locus(mc, boundary, psi)
    if locus.complex is None:
        raise PreconditionFailed("the LCS locus is empty")
    Y = locus.complex
    units = units_for(mc.characteristic)
    centers = set(locus.centers)

    for Q in conductor_fan(Y):
        if Q not in centers:
            continue
        for F in mc.facets_containing(Q):
            if faces(F).codim[Q] != 2:
                continue
            E1, E2 = sorted((E for E in faces(F).facets if E.contains_cone(Q)), key=sort_key)
            left = units.power(_index(mc, Q, E1) * _index(mc, E1, F), r)
            right = units.power(_index(mc, Q, E2) * _index(mc, E2, F), r)
            if left != right:
                return GlueCheck(False, {
                    "Q": mc.name(Q), "F": mc.name(F), "E1": mc.name(E1), "E2": mc.name(E2),
                    "values": [units.as_json(left), units.as_json(right)],
                })
    return GlueCheck(True)


@dataclass
class LcsDifferent:
    complex: MonoidalComplex
    boundary: Boundary
    differents: list[Different]
    integral: bool

    def as_dict(self) -> dict:
        Y = self.complex
        return {
            "facets": [Y.name(F) for F in Y.facets],
            "boundary": self.boundary.as_dict(Y),
            "differents": [d.as_dict(Y) for d in self.differents],
            "r_boundary_integral": self.integral,
        }


def lcs_different(mc: MonoidalComplex, boundary: Boundary, psi: Sequence, r: Optional[int] = None) -> LcsDifferent:
    r = _check_r(r)
    mc = mc.as_lattice_family()
    require_invertible(mc, boundary, r)
    return _lcs_different(mc, boundary, psi, r)


def _lcs_different(mc, boundary, psi, r) -> LcsDifferent:
    glue = lcs_glue_check(mc, boundary, psi, r)
    if not glue:
        raise GlueCheckFailed("LCS components do not glue", witness=glue.witness)
    Y = lcs_locus(mc, boundary, psi).complex

    differents = [different(mc, boundary, psi, tau) for tau in Y.facets]
    entries = {}
    for Q in smooth_primes(Y):
        tau = Y.facets_containing(Q)[0]
        d = next(d for d in differents if d.center == tau)
        entries[Q] = d.coefficient(Q)
    boundary_y = make_boundary(Y, entries)

    for eq in psi_equations(Y, boundary_y):
        if sum(a * Fraction(b) for a, b in zip(eq.functional, psi)) != eq.rhs:
            logger.error("psi does not solve the equation of %s in %s on the LCS", eq.prime.id, eq.facet.id)
            raise InconsistentDifferent("ψ does not solve the log discrepancy equations of the LCS")
    if boundary.is_effective() and not boundary_y.is_effective():
        raise ConsistencyError("effective boundary induced a non-effective different")

    fractional = [Y.name(Q) for Q, b in boundary_y.items() if (r * b).denominator != 1]
    if fractional:
        logger.error("r·B_Y is not integral at %s", fractional)
        raise InconsistentDifferent(f"{r}·B_Y is not integral", primes=fractional)
    return LcsDifferent(Y, boundary_y, differents, True)


# -- higher codimension ------------------------------------------------------------

def has_normal_components(mc: MonoidalComplex) -> bool:
    return all(entry["normal"] for entry in normalization(mc))


def maximal_chains(mc: MonoidalComplex, Z: RationalCone) -> list[tuple[RationalCone, ...]]:
    """Chains facet = X_0 ⊃ X_1 ⊃ ... ⊃ Z, one codimension per step."""
    out = []

    def walk(chain):
        top = chain[-1]
        if top == Z:
            out.append(tuple(chain))
            return
        for T in faces(top).facets:
            if T.contains_cone(Z):
                walk(chain + [T])

    for F in mc.facets_containing(Z):
        walk([F])
    return out


@dataclass
class HigherResidue:
    center: RationalCone
    constant: Any
    different: dict
    chains: list
    intermediate: list

    def as_dict(self, mc: MonoidalComplex) -> dict:
        units = units_for(mc.characteristic)
        return {
            "center": mc.name(self.center),
            "constant": units.as_json(self.constant),
            "different": {mc.name(Q): format_rational(m) for Q, m in self.different.items()},
            "chain": [mc.name(c) for c in self.chains[0]],
            "chains": len(self.chains),
            "intermediate": [
                {mc.name(Q): format_rational(m) for Q, m in step.items()} for step in self.intermediate
            ],
        }


def higher_residue(mc: MonoidalComplex, boundary: Boundary, psi: Sequence, Z: Any,
                   r: Optional[int] = None) -> HigherResidue:
    r = _check_r(r)
    mc = mc.as_lattice_family()
    if not has_normal_components(mc):
        raise NotNormalComponents("higher residues need normal irreducible components")
    Z = mc.cone(Z)
    require_wlc(mc, boundary, psi)
    if Z not in lc_centers(mc, boundary, psi):
        raise NotAnLcCenter(f"{mc.name(Z)} is not an lc center")

    units = units_for(mc.characteristic)
    conductor = set(conductor_primes(mc))
    expected = _psi_different(mc, Z, psi)
    constant = None
    first_steps = None
    chains = sorted(maximal_chains(mc, Z), key=lambda ch: [sort_key(c) for c in ch])

    for chain in chains:
        coefficients = {
            T: Fraction(1) if T in conductor else boundary.coefficient(T) for T in faces(chain[0]).facets
        }
        steps = [coefficients]
        value = units.one
        for upper, lower in zip(chain, chain[1:]):
            value = units.mul(value, units.power(Fraction(signed_incidence(mc, lower, upper)), r))
            coefficients = _step_different(mc, upper, lower, coefficients)
            steps.append(coefficients)
        if coefficients != expected:
            logger.error("chain %s ends in %s, psi gives %s", [c.id for c in chain], coefficients, expected)
            raise InconsistentDifferent(f"residue chain to {mc.name(Z)} disagrees with ψ")
        if constant is not None and value != constant:
            raise ConsistencyError(f"residue constant to {mc.name(Z)} depends on the chain")
        constant = value
        if first_steps is None:
            first_steps = steps

    return HigherResidue(Z, constant, expected, chains, first_steps)


# -- LCS chain --------------------------------------------------------------------

@dataclass
class ChainStep:
    complex: MonoidalComplex
    boundary: Boundary
    residues: ResidueDatum
    centers: list

    def as_dict(self) -> dict:
        X = self.complex
        return {
            "facets": [X.name(F) for F in X.facets],
            "dimension": X.dimension,
            "boundary": self.boundary.as_dict(X),
            "lc_centers": [X.name(c) for c in self.centers],
            "residue_constants": self.residues.as_dict(X),
        }


def lcs_chain(mc: MonoidalComplex, boundary: Boundary, r: Optional[int] = None) -> list[ChainStep]:
    """X = X_0 ⊃ X_1 ⊃ ... with X_i the LCS locus of (X_{i-1}, B_{X_{i-1}})."""
    r = _check_r(r)
    X = mc.as_lattice_family()
    if not has_normal_components(X):
        raise NotNormalComponents("the LCS chain needs normal irreducible components")
    psi = solve_psi(X, boundary).psi
    require_invertible(X, boundary, r)
    B = boundary

    steps = []
    while True:
        require_wlc(X, B, psi)
        logger.info("LCS chain step %d: %d facets of dimension %d", len(steps), len(X.facets), X.dimension)
        centers = lc_centers(X, B, psi)
        steps.append(ChainStep(X, B, _residue_constants(X, B, psi, r), centers))
        locus = lcs_locus(X, B, psi)
        if locus.complex is None:
            break
        lower = _lcs_different(X, B, psi, r)
        Y, B_Y = lower.complex, lower.boundary
        if not is_s2(Y) or not is_weakly_normal(Y):
            logger.error("LCS locus with facets %s is not S2 and weakly normal", [F.id for F in Y.facets])
            raise ConsistencyError("LCS locus is not S2 and weakly normal")
        if set(lc_centers(Y, B_Y, psi)) != set(locus.centers):
            raise ConsistencyError("lc centers of the LCS differ from the lower lc centers of X")
        X, B = Y, B_Y
    return steps
