from fractions import Fraction

from django.test import SimpleTestCase

from toric.exceptions import (
    GlueCheckFailed,
    InconsistentDifferent,
    NotAnLcCenter,
    NotNormalComponents,
    NotOrientable,
    PreconditionFailed,
    ValidationError,
)
from toric.logpair import (
    invertibility_orders,
    lc_centers,
    make_boundary,
    solve_psi,
    toric_boundary_minus_conductor,
)
from toric.mcomplex import coordinate_arrangement, cusp_cone
from toric.orientation import residue_sign, signed_incidence
from toric.residue import (
    _lcs_different,
    different,
    has_normal_components,
    higher_residue,
    lcs_chain,
    lcs_different,
    lcs_glue_check,
    maximal_chains,
    residue_constants,
)
from toric.tests.fixtures import glue_failure, glued_half_planes, non_orientable_fan, steep_cone

HALF = Fraction(1, 2)


def _pair(mc, entries):
    boundary = make_boundary(mc, entries)
    return boundary, solve_psi(mc, boundary).psi


class SignTests(SimpleTestCase):
    def test_cusp_signs(self):
        mc = cusp_cone()
        sigma, tau1, tau2 = mc.cone("sigma"), mc.cone("tau1"), mc.cone("tau2")
        self.assertEqual(residue_sign(mc, sigma, tau1), -1)
        self.assertEqual(residue_sign(mc, sigma, tau2), 1)

    def test_incidence_carries_the_index(self):
        mc = glued_half_planes()
        y = mc.cone("y")
        self.assertEqual(abs(signed_incidence(mc, y, mc.cone("F0"))), 3)
        self.assertEqual(abs(signed_incidence(mc, y, mc.cone("F1"))), 1)


class DifferentTests(SimpleTestCase):
    def test_cusp(self):
        mc = cusp_cone()
        boundary, psi = _pair(mc, {"tau1": 1})
        self.assertEqual(psi, (HALF, 0))
        found = different(mc, boundary, psi, "tau1")
        self.assertEqual(found.coefficient(mc.cone("origin")), HALF)
        self.assertEqual(found.as_dict(mc), {"center": "tau1", "coefficients": {"origin": "1/2"}})

    def test_only_codimension_one_centers(self):
        mc = cusp_cone()
        boundary, psi = _pair(mc, {"tau1": 1})
        with self.assertRaises(NotAnLcCenter):
            different(mc, boundary, psi, "tau2")
        with self.assertRaises(NotAnLcCenter):
            different(mc, boundary, psi, "sigma")

    def test_facets_agree_across_the_conductor(self):
        mc = glued_half_planes()
        boundary, psi = _pair(mc, {"x+": -2})
        self.assertEqual(psi, (0, 3))
        self.assertEqual(different(mc, boundary, psi, "y").coefficient(mc.cone("origin")), 0)


class ResidueConstantTests(SimpleTestCase):
    def test_cusp(self):
        mc = cusp_cone()
        boundary, psi = _pair(mc, {"tau1": 1})
        data = residue_constants(mc, boundary, psi).as_dict(mc)
        self.assertEqual(data["r"], 2)
        self.assertEqual(data["constants_facets"], {"sigma": "1"})
        self.assertEqual(data["constants_primes"], {"tau1": "1"})
        self.assertEqual(data["signs"], {"tau1 < sigma": -1, "tau2 < sigma": 1})

    def test_glued_half_planes(self):
        mc = glued_half_planes()
        boundary, psi = _pair(mc, {"x+": -2})
        data = residue_constants(mc, boundary, psi).as_dict(mc)
        self.assertEqual(data["root"], "F1")
        self.assertEqual(data["constants_facets"], {"F1": "1", "F0": "9"})
        self.assertEqual(data["constants_primes"], {"y": "1"})

    def test_other_root(self):
        mc = glued_half_planes()
        boundary, psi = _pair(mc, {"x+": -2})
        data = residue_constants(mc, boundary, psi, root="F0", strategy="dfs").as_dict(mc)
        self.assertEqual(data["constants_facets"], {"F0": "1", "F1": "1/9"})

    def test_positive_characteristic(self):
        mc = glued_half_planes(7)
        boundary, psi = _pair(mc, {"x+": -2})
        data = residue_constants(mc, boundary, psi).as_dict(mc)
        self.assertEqual(data["constants_facets"], {"F1": 1, "F0": 2})

    def test_r_must_be_even(self):
        mc = cusp_cone()
        boundary, psi = _pair(mc, {"tau1": 1})
        for r in (0, 3, -2):
            with self.assertRaises(ValidationError):
                residue_constants(mc, boundary, psi, r)

    def test_non_orientable(self):
        mc = non_orientable_fan()
        boundary, psi = _pair(mc, {})
        with self.assertRaises(NotOrientable):
            residue_constants(mc, boundary, psi)

        mc = non_orientable_fan(3)
        boundary, psi = _pair(mc, {})
        self.assertEqual(len(residue_constants(mc, boundary, psi).constants_facets), 3)



class InvertibilityTests(SimpleTestCase):
    def setUp(self):
        self.mc = steep_cone()
        self.boundary, self.psi = _pair(self.mc, {"tau1": 1})

    def test_orders(self):
        self.assertEqual(self.psi, (Fraction(1, 3), 0))
        self.assertEqual(invertibility_orders(self.mc, self.boundary, 6), [3, 6])

    def test_r_must_trivialize_the_canonical_class(self):
        with self.assertRaises(PreconditionFailed) as caught:
            residue_constants(self.mc, self.boundary, self.psi, 2)
        self.assertEqual(caught.exception.details["orders"], [])
        with self.assertRaises(PreconditionFailed):
            lcs_different(self.mc, self.boundary, self.psi, 2)
        with self.assertRaises(PreconditionFailed):
            lcs_chain(self.mc, self.boundary, r=2)

    def test_invertible_order(self):
        data = residue_constants(self.mc, self.boundary, self.psi, 6).as_dict(self.mc)
        self.assertEqual(data["constants_facets"], {"sigma": "1"})
        lower = lcs_different(self.mc, self.boundary, self.psi, 6)
        self.assertEqual(lower.as_dict()["boundary"], {"origin": "2/3"})
        self.assertTrue(lower.integral)

    def test_fractional_different(self):
        with self.assertRaises(InconsistentDifferent) as caught:
            _lcs_different(self.mc, self.boundary, self.psi, 2)
        self.assertEqual(caught.exception.details["primes"], ["origin"])

class GlueTests(SimpleTestCase):
    def test_components_glue(self):
        mc = glued_half_planes()
        boundary, psi = _pair(mc, {"x+": -2})
        self.assertTrue(lcs_glue_check(mc, boundary, psi))

        lower = lcs_different(mc, boundary, psi)
        self.assertEqual(lower.as_dict(), {
            "facets": ["y"],
            "boundary": {},
            "differents": [{"center": "y", "coefficients": {"origin": "0"}}],
            "r_boundary_integral": True,
        })

    def test_components_do_not_glue(self):
        mc = glue_failure()
        boundary, psi = _pair(mc, {})
        self.assertEqual(psi, (1, 0, 0))
        check = lcs_glue_check(mc, boundary, psi)
        self.assertFalse(check)
        self.assertEqual(check.witness["Q"], "e1")
        self.assertEqual(check.witness["F"], "F")
        self.assertEqual({check.witness["E1"], check.witness["E2"]}, {"E1", "E2"})
        self.assertEqual(sorted(check.witness["values"], key=int), ["4", "16"])
        with self.assertRaises(GlueCheckFailed):
            lcs_different(mc, boundary, psi)

    def test_empty_locus(self):
        mc = cusp_cone()
        boundary, psi = _pair(mc, {})
        with self.assertRaises(PreconditionFailed):
            lcs_glue_check(mc, boundary, psi)


class HigherResidueTests(SimpleTestCase):
    def test_chains_to_the_origin(self):
        mc = coordinate_arrangement(2, 0)
        self.assertEqual(len(maximal_chains(mc, mc.cone("0"))), 2)
        self.assertEqual(len(maximal_chains(mc, mc.cone("e1"))), 1)

    def test_quadrant_origin(self):
        mc = coordinate_arrangement(2, 0)
        boundary = toric_boundary_minus_conductor(mc)
        psi = solve_psi(mc, boundary).psi
        found = higher_residue(mc, boundary, psi, "0")
        self.assertEqual(found.constant, 1)
        self.assertEqual(len(found.chains), 2)
        self.assertEqual(found.different, {})

    def test_cusp(self):
        mc = cusp_cone()
        boundary, psi = _pair(mc, {"tau1": 1})
        data = higher_residue(mc, boundary, psi, "tau1").as_dict(mc)
        self.assertEqual(data["different"], {"origin": "1/2"})
        self.assertEqual(data["chain"], ["sigma", "tau1"])
        self.assertEqual(data["constant"], "1")
        self.assertEqual(data["intermediate"][-1], {"origin": "1/2"})
        with self.assertRaises(NotAnLcCenter):
            higher_residue(mc, boundary, psi, "tau2")

    def test_needs_normal_components(self):
        mc = glue_failure()
        self.assertFalse(has_normal_components(mc))
        boundary, psi = _pair(mc, {})
        with self.assertRaises(NotNormalComponents):
            higher_residue(mc, boundary, psi, "e1")

    def test_every_center_of_a_coordinate_arrangement(self):
        for n in (3, 4):
            mc = coordinate_arrangement(n, 1)
            boundary = make_boundary(mc, {})
            psi = (0,) * n
            for Z in lc_centers(mc, boundary, psi):
                found = higher_residue(mc, boundary, psi, Z)
                self.assertEqual(found.constant, 1, mc.name(Z))
                self.assertTrue(all(m == 1 for m in found.different.values()), mc.name(Z))
            self.assertGreater(len(higher_residue(mc, boundary, psi, "0").chains), 1)

    def test_ray_of_the_orthant(self):
        mc = coordinate_arrangement(3, 0)
        boundary = toric_boundary_minus_conductor(mc)
        psi = solve_psi(mc, boundary).psi
        self.assertEqual(psi, (0, 0, 0))
        data = higher_residue(mc, boundary, psi, "e1").as_dict(mc)
        self.assertEqual(data["different"], {"0": "1"})
        self.assertEqual(data["chains"], 2)


class LcsChainTests(SimpleTestCase):
    def test_coordinate_arrangements(self):
        for n in (2, 3):
            mc = coordinate_arrangement(n, 1)
            steps = lcs_chain(mc, toric_boundary_minus_conductor(mc))
            self.assertEqual([s.complex.dimension for s in steps], list(range(n - 1, -1, -1)))

    def test_cusp_with_reduced_boundary(self):
        mc = cusp_cone()
        steps = lcs_chain(mc, toric_boundary_minus_conductor(mc))
        self.assertEqual([s.complex.dimension for s in steps], [2, 1, 0])
        self.assertEqual(steps[0].as_dict()["lc_centers"], ["sigma", "tau1", "tau2", "origin"])

    def test_odd_r(self):
        mc = cusp_cone()
        with self.assertRaises(ValidationError):
            lcs_chain(mc, toric_boundary_minus_conductor(mc), r=1)

    def test_zero_boundaries_and_unit_constants(self):
        for n, p in ((3, 1), (4, 2)):
            mc = coordinate_arrangement(n, p)
            steps = lcs_chain(mc, make_boundary(mc, {}))
            self.assertEqual(len(steps), n - p + 1)
            for step in steps:
                self.assertEqual(step.boundary.items(), [])
                self.assertTrue(all(c == 1 for c in step.residues.constants_facets.values()))

    def test_spanning_tree_does_not_matter(self):
        mc = coordinate_arrangement(4, 1)
        boundary, psi = _pair(mc, {})
        bfs = residue_constants(mc, boundary, psi, strategy="bfs")
        dfs = residue_constants(mc, boundary, psi, strategy="dfs")
        self.assertEqual(bfs.constants_facets, dfs.constants_facets)
        self.assertEqual(bfs.constants_primes, dfs.constants_primes)
