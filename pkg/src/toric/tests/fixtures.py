"""Complexes shared by the test modules."""

from toric.mcomplex import GENERATORS, LATTICE_FAMILY, RawComplex, affine_semigroup, validate


def non_orientable_fan(characteristic=0):
    """Complete fan on (1,0), (-1,1), (-1,-1) whose facet cycle has incidence ratio 1/2."""
    return validate(RawComplex(
        2,
        {
            "C01": [(1, 0), (-1, 1)],
            "C12": [(-1, 1), (-1, -1)],
            "C20": [(-1, -1), (1, 0)],
        },
        LATTICE_FAMILY,
        faces={"r0": [(1, 0)], "r1": [(-1, 1)], "r2": [(-1, -1)], "origin": []},
        lattices={
            "C01": [(1, 0), (0, 1)],
            "C12": [(1, 0), (0, 1)],
            "C20": [(2, 0), (1, 1)],
            "r0": [(2, 0)],
            "r1": [(-1, 1)],
            "r2": [(1, 1)],
        },
        characteristic=characteristic,
    ))


def glued_half_planes(characteristic=0):
    """
    Quadrants F0 = cone(x+, y) with Λ = Z^2 and F1 = cone(x-, y) with
    Λ = Z(1,0) + Z(0,3), glued along y with Λ_y = Z(0,3).
    """
    return validate(RawComplex(
        2,
        {"F0": [(1, 0), (0, 1)], "F1": [(-1, 0), (0, 1)]},
        LATTICE_FAMILY,
        faces={"x+": [(1, 0)], "y": [(0, 1)], "x-": [(-1, 0)], "origin": []},
        lattices={"F1": [(1, 0), (0, 3)], "y": [(0, 3)]},
        characteristic=characteristic,
    ))


def glue_failure():
    """Orthant of Z^3 whose LCS components E1, E2 meet along e1 with unequal incidence products."""
    return validate(RawComplex(
        3,
        {"F": [(1, 0, 0), (0, 1, 0), (0, 0, 1)]},
        LATTICE_FAMILY,
        faces={
            "E1": [(1, 0, 0), (0, 1, 0)],
            "E2": [(1, 0, 0), (0, 0, 1)],
            "E3": [(0, 1, 0), (0, 0, 1)],
            "e1": [(1, 0, 0)],
            "e2": [(0, 1, 0)],
            "e3": [(0, 0, 1)],
            "origin": [],
        },
        lattices={
            "E1": [(1, 0, 0), (0, 2, 0)],
            "E2": [(2, 0, 0), (0, 0, 1)],
            "e1": [(2, 0, 0)],
            "e2": [(0, 2, 0)],
        },
    ))


def quadrant_with_double_x_ray():
    """First quadrant, Λ_F = Z^2, Λ_x = 2Z(1,0), Λ_y = Z(0,1)."""
    return validate(RawComplex(
        2,
        {"F": [(1, 0), (0, 1)]},
        LATTICE_FAMILY,
        faces={"x": [(1, 0)], "y": [(0, 1)], "origin": []},
        lattices={"x": [(2, 0)]},
    ))


def orthant_not_s2_at_ray():
    """Orthant of Z^3 with Λ_{e1} = 2Z e1 although both planes through e1 are saturated."""
    return validate(RawComplex(
        3,
        {"F": [(1, 0, 0), (0, 1, 0), (0, 0, 1)]},
        LATTICE_FAMILY,
        faces={"e1": [(1, 0, 0)]},
        lattices={"e1": [(2, 0, 0)]},
    ))


def numerical_semigroup(*generators):
    return affine_semigroup([(g,) for g in generators])


def s2_closure_gap():
    """S = <(2,0), (3,0), (0,1), (1,1)>: (1,0) lies in S' but not in S."""
    return affine_semigroup([(2, 0), (3, 0), (0, 1), (1, 1)])


def generator_quadrant(generators):
    return validate(RawComplex(2, {"S": list(generators)}, GENERATORS, semigroups={"S": list(generators)}))


def semigroup_box(generators, bound):
    """Elements of the N-span of non-negative generators with every coordinate at most ``bound``."""
    d = len(generators[0])
    zero = (0,) * d
    points, pending = {zero}, [zero]
    while pending:
        p = pending.pop()
        for g in generators:
            q = tuple(a + b for a, b in zip(p, g))
            if max(q) <= bound and q not in points:
                points.add(q)
                pending.append(q)
    return points


def steep_cone():
    """cone((1,0),(1,3)) with S = Z^2 ∩ σ; with B = τ1 its canonical class has order 3."""
    return validate(RawComplex(
        2,
        {"sigma": [(1, 0), (1, 3)]},
        LATTICE_FAMILY,
        faces={"tau1": [(1, 0)], "tau2": [(1, 3)], "origin": []},
    ))
