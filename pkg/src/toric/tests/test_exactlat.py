from fractions import Fraction
from itertools import product

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st
from sympy import Matrix

from toric.exactlat import (
    INFINITE,
    OrientedBasis,
    Sublattice,
    dot,
    hnf,
    integer_combination,
    lattice_intersect,
    lattice_sum,
    orientation_sign,
    signed_volume,
    solve_integral,
    solve_rational,
    sublattice_index,
)
from toric.exceptions import ContainmentViolation, SpanMismatch
from toric.tests.strategies import full_rank_matrices, matrices, sublattices, unimodular_bases, vectors

Z2 = Sublattice.full(2)


def _times(U, A):
    return [[sum(U[i][k] * A[k][j] for k in range(len(A))) for j in range(len(A[0]))] for i in range(len(U))]


class HermiteNormalFormTests(SimpleTestCase):
    def test_small_example(self):
        H, U = hnf([[2, 4], [1, 3]])
        self.assertEqual(H, [[1, 1], [0, 2]])
        self.assertEqual(_times(U, [[2, 4], [1, 3]]), H)

    def test_sublattice_is_stored_in_normal_form(self):
        L = Sublattice.from_generators(2, [(2, 4), (1, 3)])
        self.assertEqual(L.basis, ((1, 1), (0, 2)))
        self.assertEqual(L, Sublattice.from_generators(2, [(1, 1), (0, 2), (3, 5)]))

    @settings(max_examples=1000, deadline=None)
    @given(matrices())
    def test_hnf_is_idempotent_and_unimodular(self, A):
        H, U = hnf(A)
        self.assertEqual(hnf(H)[0], H)
        self.assertEqual(_times(U, A), H)
        self.assertIn(Matrix(U).det(), (1, -1))


class SublatticeTests(SimpleTestCase):
    def test_membership(self):
        L = Sublattice.from_generators(2, [(2, 0), (0, 3)])
        self.assertIn((4, -3), L)
        self.assertNotIn((1, 0), L)
        self.assertNotIn((Fraction(1, 2), 0), Z2)

    def test_saturation_and_complement(self):
        L = Sublattice.from_generators(2, [(2, 2)])
        self.assertEqual(L.saturation().basis, ((1, 1),))
        self.assertFalse(L.is_saturated())
        self.assertEqual(L.orthogonal_complement().basis, ((1, -1),))

    def test_intersection_and_sum(self):
        a = Sublattice.from_generators(2, [(2, 0), (0, 1)])
        b = Sublattice.from_generators(2, [(1, 0), (0, 3)])
        self.assertEqual(lattice_intersect(a, b).basis, ((2, 0), (0, 3)))
        self.assertEqual(lattice_sum(a, b), Z2)

    def test_index(self):
        L = Sublattice.from_generators(2, [(2, 4), (1, 3)])
        self.assertEqual(sublattice_index(L, Z2), 2)
        self.assertEqual(sublattice_index(Sublattice.from_generators(2, [(1, 0)]), Z2), INFINITE)

    def test_index_needs_containment(self):
        with self.assertRaises(ContainmentViolation):
            sublattice_index(Sublattice.from_generators(2, [(1, 0)]), Sublattice.from_generators(2, [(2, 0)]))

    @settings(max_examples=1000, deadline=None)
    @given(full_rank_matrices(), full_rank_matrices())
    def test_index_is_multiplicative(self, M, K):
        B = Sublattice.from_generators(2, M)
        A = Sublattice.from_generators(2, [
            tuple(sum(K[i][j] * B.basis[j][k] for j in range(2)) for k in range(2)) for i in range(2)
        ])
        self.assertEqual(sublattice_index(B, Z2), abs(Matrix(M).det()))
        self.assertEqual(sublattice_index(A, Z2), sublattice_index(A, B) * sublattice_index(B, Z2))

    @settings(max_examples=1000, deadline=None)
    @given(sublattices(), sublattices())
    def test_intersection_lies_in_both(self, a, b):
        meet = lattice_intersect(a, b)
        self.assertTrue(a.contains_lattice(meet))
        self.assertTrue(b.contains_lattice(meet))
        self.assertTrue(lattice_sum(a, b).contains_lattice(a))


class OrientationTests(SimpleTestCase):
    def test_swapping_flips_the_sign(self):
        canonical = OrientedBasis.canonical(Z2)
        self.assertEqual(orientation_sign(canonical, canonical), 1)
        self.assertEqual(orientation_sign(canonical, canonical.swapped()), -1)

    def test_not_a_basis(self):
        with self.assertRaises(SpanMismatch):
            OrientedBasis(Z2, ((2, 0), (0, 1)))

    def test_signed_volume(self):
        self.assertEqual(signed_volume([(0, 1), (1, 0)], Z2), -1)
        self.assertEqual(signed_volume([(2, 0), (0, 1)], Z2), 2)

    @settings(max_examples=1000, deadline=None)
    @given(full_rank_matrices(), unimodular_bases(), unimodular_bases(), unimodular_bases())
    def test_signs_compose(self, M, U, V, W):
        L = Sublattice.from_generators(2, M)
        a, b, c = (OrientedBasis(L, tuple(map(tuple, _times(X, L.basis)))) for X in (U, V, W))
        self.assertEqual(orientation_sign(a, c), orientation_sign(a, b) * orientation_sign(b, c))
        self.assertEqual(orientation_sign(a, a), 1)


class SolverTests(SimpleTestCase):
    def test_integral_solution(self):
        m = solve_integral([[2, -1]], [1], Z2)
        self.assertEqual(dot((2, -1), m), 1)
        self.assertIsNone(solve_integral([[2, 0]], [1], Z2))

    def test_integral_solution_in_a_sublattice(self):
        L = Sublattice.from_generators(2, [(0, 3)])
        self.assertEqual(solve_integral([[0, 1]], [6], L), (0, 6))
        self.assertIsNone(solve_integral([[0, 1]], [2], L))

    @settings(max_examples=300, deadline=None)
    @given(
        matrices(rows=st.integers(1, 2), cols=st.just(2), elements=st.integers(-3, 3)),
        vectors(2, st.integers(-6, 6)),
        sublattices(d=2),
    )
    def test_no_solution_agrees_with_the_box(self, A, c, L):
        c = c[:len(A)]
        m = solve_integral(A, c, L)
        if m is not None:
            self.assertIn(m, L)
            self.assertEqual([dot(a, m) for a in A], list(c))
            return
        for p in product(range(-10, 11), repeat=2):
            if p in L:
                self.assertNotEqual([dot(a, p) for a in A], list(c), p)

    def test_rational_solution(self):
        self.assertEqual(solve_rational([[1, 1], [1, -1]], [2, 0], 2), [1, 1])
        self.assertEqual(solve_rational([[2, -1]], [1], 2), [Fraction(1, 2), 0])
        self.assertIsNone(solve_rational([[1, 1], [1, 1]], [1, 2], 2))

    def test_integer_combination(self):
        c = integer_combination([(2, 0), (3, 0)], (1, 0))
        self.assertEqual(2 * c[0] + 3 * c[1], 1)
        self.assertIsNone(integer_combination([(2, 0)], (1, 0)))
