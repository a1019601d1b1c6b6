from fractions import Fraction
from math import comb

from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from toric.cones import RationalCone, dual_cone, face_of_relint, faces, facet_functional, facet_normal, intersect
from toric.exactlat import Sublattice, dot
from toric.exceptions import NotAFacet
from toric.tests.strategies import cones, vectors

sigma = RationalCone.from_generators(2, [(1, 0), (1, 2)])
tau1 = RationalCone.from_generators(2, [(1, 0)])
tau2 = RationalCone.from_generators(2, [(1, 2)])
origin = RationalCone.origin(2)


class RationalConeTests(SimpleTestCase):
    def test_redundant_generators_are_dropped(self):
        c = RationalCone.from_generators(2, [(2, 0), (1, 1), (1, 2), (3, 3)])
        self.assertEqual(c, sigma)
        self.assertEqual(c.rays, ((1, 0), (1, 2)))

    def test_half_plane_has_lineality(self):
        c = RationalCone.from_generators(2, [(1, 0), (-1, 0), (0, 1)])
        self.assertEqual(c.lineality.rank, 1)
        self.assertEqual(c.dim, 2)
        self.assertTrue(c.contains((-5, 1)))
        self.assertFalse(c.contains((0, -1)))

    def test_membership(self):
        self.assertTrue(sigma.contains((1, 1)))
        self.assertTrue(sigma.relint_contains((1, 1)))
        self.assertFalse(sigma.relint_contains((2, 0)))
        self.assertFalse(sigma.contains((0, 1)))

    def test_faces_of_the_cusp(self):
        poset = faces(sigma)
        self.assertEqual(set(poset.faces), {sigma, tau1, tau2, origin})
        self.assertEqual(set(poset.facets), {tau1, tau2})
        self.assertEqual(poset.minimal, origin)

    def test_facet_functional(self):
        self.assertEqual(facet_normal(sigma, tau1), (0, 1))
        self.assertEqual(facet_functional(sigma, tau2, Sublattice.full(2)), (2, -1))
        self.assertEqual(facet_functional(sigma, tau1, Sublattice.from_generators(2, [(1, 0), (0, 2)])), (0, Fraction(1, 2)))
        with self.assertRaises(NotAFacet):
            facet_normal(sigma, origin)

    def test_intersection(self):
        other = RationalCone.from_generators(2, [(1, 0), (0, 1)])
        self.assertEqual(intersect(sigma, other), sigma)
        self.assertEqual(intersect(sigma, RationalCone.from_generators(2, [(0, 1), (-1, 0)])), origin)

    @settings(max_examples=1000, deadline=None)
    @given(cones())
    def test_biduality(self, c):
        self.assertEqual(dual_cone(dual_cone(c)), c)

    @settings(max_examples=1000, deadline=None)
    @given(cones(), vectors(2))
    def test_relative_interiors_partition_the_cone(self, c, p):
        poset = faces(c)
        holders = [f for f in poset.faces if f.relint_contains(p)]
        if c.contains(p):
            self.assertEqual(holders, [face_of_relint(poset, p)])
        else:
            self.assertEqual(holders, [])
            self.assertIsNone(face_of_relint(poset, p))

    @settings(max_examples=300, deadline=None)
    @given(cones(d=3, max_generators=5))
    def test_biduality_in_three_dimensions(self, c):
        self.assertEqual(dual_cone(dual_cone(c)), c)

    @settings(max_examples=300, deadline=None)
    @given(cones(d=3, max_generators=5), vectors(3))
    def test_relative_interiors_partition_in_three_dimensions(self, c, p):
        holders = [f for f in faces(c).faces if f.relint_contains(p)]
        self.assertEqual(len(holders), 1 if c.contains(p) else 0)


class FaceLatticeTests(SimpleTestCase):
    def test_orthant_face_counts(self):
        for d in range(1, 6):
            orthant = RationalCone.from_generators(d, [tuple(int(i == j) for j in range(d)) for i in range(d)])
            poset = faces(orthant)
            self.assertEqual(len(poset.faces), 2 ** d)
            for k in range(d + 1):
                self.assertEqual(len(poset.of_codim(k)), comb(d, k), (d, k))

    @settings(max_examples=500, deadline=None)
    @given(cones(d=3, max_generators=5))
    def test_facet_normals_cut_out_the_facets(self, c):
        for f in faces(c).facets:
            n = facet_normal(c, f)
            self.assertTrue(all(dot(n, g) == 0 for g in f.cone_generators))
            self.assertTrue(all(dot(n, g) >= 0 for g in c.cone_generators))
            self.assertTrue(any(dot(n, g) > 0 for g in c.cone_generators))

    @settings(max_examples=500, deadline=None)
    @given(cones(d=3, max_generators=4), st.data())
    def test_faces_absorb_sums(self, c, data):
        gens = c.cone_generators
        pick = st.lists(st.integers(0, 3), min_size=len(gens), max_size=len(gens))
        m = tuple(sum(a * g[i] for a, g in zip(data.draw(pick), gens)) for i in range(3))
        n = tuple(sum(a * g[i] for a, g in zip(data.draw(pick), gens)) for i in range(3))
        total = tuple(a + b for a, b in zip(m, n))
        for tau in faces(c).faces:
            if tau.contains(total):
                self.assertTrue(tau.contains(m) and tau.contains(n), tau)
