"""Hypothesis strategies for small exact objects."""

from hypothesis import assume, strategies as st
from sympy import Matrix

from toric.cones import RationalCone
from toric.exactlat import Sublattice

small = st.integers(min_value=-4, max_value=4)


def vectors(d, elements=small):
    return st.tuples(*[elements] * d)


@st.composite
def matrices(draw, rows=st.integers(1, 4), cols=st.integers(1, 4), elements=small):
    m, n = draw(rows), draw(cols)
    return [list(draw(vectors(n, elements))) for _ in range(m)]


@st.composite
def full_rank_matrices(draw, d=2):
    """A square integer matrix with non-zero determinant."""
    rows = [list(draw(vectors(d))) for _ in range(d)]
    assume(Matrix(rows).det() != 0)
    return rows


@st.composite
def sublattices(draw, d=3):
    gens = draw(st.lists(vectors(d), min_size=0, max_size=4))
    return Sublattice.from_generators(d, gens)


@st.composite
def cones(draw, d=2, max_generators=4):
    gens = draw(st.lists(vectors(d, st.integers(-3, 3)), min_size=1, max_size=max_generators))
    return RationalCone.from_generators(d, gens)


@st.composite
def pointed_generators(draw, d=2, max_generators=4, bound=3):
    """Non-zero generators with non-negative coordinates, so their cone is pointed."""
    gens = draw(st.lists(
        vectors(d, st.integers(0, bound)).filter(any),
        min_size=1, max_size=max_generators, unique=True,
    ))
    return gens


numerical_semigroups = st.lists(st.integers(2, 9), min_size=1, max_size=3, unique=True)

generator_families = st.integers(1, 3).flatmap(lambda d: pointed_generators(d=d, max_generators=5, bound=4))


@st.composite
def unimodular_bases(draw, d=2, steps=6):
    """Rows of a random matrix of determinant ±1, built from elementary moves."""
    rows = [[int(i == j) for j in range(d)] for i in range(d)]
    for _ in range(draw(st.integers(0, steps))):
        i, j = draw(st.integers(0, d - 1)), draw(st.integers(0, d - 1))
        move = draw(st.sampled_from(["swap", "negate", "add"]))
        if move == "swap":
            rows[i], rows[j] = rows[j], rows[i]
        elif move == "negate":
            rows[i] = [-x for x in rows[i]]
        elif i != j:
            k = draw(st.integers(-2, 2))
            rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
    return tuple(tuple(r) for r in rows)
