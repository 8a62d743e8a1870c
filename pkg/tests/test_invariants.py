"""Tests for closed-form homology and the disc-with-holes calculus."""

import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from sgm_workbench.atoms import builtin_atoms
from sgm_workbench.graded_algebra import Coefficients, GradedModule
from sgm_workbench.invariants import (
    HoleSpec,
    connectivity_of_term,
    disc_with_holes_homology,
    homology_of_term,
    massey_vanish_by_degree,
    realize_ranks,
)
from sgm_workbench.terms import Atom, Product, bouquet, conn_sum
from sgm_workbench.workbench_utils import HypothesisError, TermError, VerdictStatus

Z = Coefficients.integers()
ATOMS = builtin_atoms()


def atom(name: str) -> Atom:
    return Atom(ATOMS[name])


class TestHomologyOfTerm(unittest.TestCase):
    """Closed-form rules for bouquets, products and connected sums."""

    def test_connected_sum_of_s2xs2(self) -> None:
        for q in (2, 3):
            term = conn_sum(*[atom("S2xS2")] * q)
            self.assertEqual(
                homology_of_term(term, Z), GradedModule.from_ranks(Z, {0: 1, 2: 2 * q, 4: 1})
            )

    def test_product_with_bouquet(self) -> None:
        term = Product(atom("S2"), bouquet(atom("S3"), atom("S3")))
        self.assertEqual(
            homology_of_term(term, Z), GradedModule.from_ranks(Z, {0: 1, 2: 1, 3: 2, 5: 2})
        )

    def test_sphere(self) -> None:
        self.assertEqual(homology_of_term(atom("S7"), Z), GradedModule.from_ranks(Z, {0: 1, 7: 1}))

    def test_torsion_and_coefficients(self) -> None:
        wu = atom("Wu")
        z2 = Coefficients.mod(2)
        self.assertEqual(homology_of_term(wu, z2), GradedModule.from_ranks(z2, {0: 1, 2: 1, 3: 1, 5: 1}))
        q = Coefficients.rationals()
        self.assertEqual(homology_of_term(wu, q), GradedModule.from_ranks(q, {0: 1, 5: 1}))

    def test_connectivity(self) -> None:
        self.assertEqual(connectivity_of_term(atom("S3")), 2)
        self.assertEqual(connectivity_of_term(bouquet(atom("S2"), atom("S4"))), 1)
        self.assertEqual(connectivity_of_term(Product(atom("S3"), atom("S3"))), 2)
        self.assertEqual(connectivity_of_term(atom("Wu")), 1)

    def test_connectivity_of_non_simply_connected(self) -> None:
        with self.assertLogs("sgm_workbench", level="WARNING"):
            self.assertEqual(connectivity_of_term(atom("S1")), 0)
        with self.assertRaises(TermError):
            connectivity_of_term(atom("S1"), strict=True)


class TestHoleSpec(unittest.TestCase):
    """Hole specifications and their linking data."""

    def test_zero_spheres_are_points(self) -> None:
        self.assertEqual(HoleSpec.of([[0, 2], [0]]).holes, ((2,), ()))

    def test_linking_validation(self) -> None:
        with self.assertRaises(ValueError):
            HoleSpec.of([[3]], {(0, 1): 1})
        with self.assertRaises(ValueError):
            HoleSpec.of([[3], [3]], {(0, 0): 1})
        spec = HoleSpec.of([[2], [3]], {(1, 0): 2})
        self.assertEqual(spec.linking_number(0, 1), 2)
        spec.check_linking(6)
        with self.assertRaises(ValueError):
            HoleSpec.of([[2], [2]], {(0, 1): 1}).check_linking(6)

    def test_json(self) -> None:
        spec = HoleSpec.from_json({"holes": [[2], [3]], "linking": [[0, 1, 1]]})
        self.assertEqual(spec.to_json(), {"holes": [[2], [3]], "linking": [[0, 1, 1]]})
        self.assertEqual(HoleSpec.from_json([[3], [3]]), HoleSpec.of([[3], [3]]))
        self.assertEqual(str(HoleSpec.of([[2, 3], []])), "[S2vS3, pt]")


class TestDiscWithHoles(unittest.TestCase):
    """Homology of a disc with holes, realization and degree-based vanishing."""

    def test_three_spheres(self) -> None:
        h = disc_with_holes_homology(6, 2, HoleSpec.of([[3], [3], [3]]), Z)
        self.assertEqual(h, GradedModule.from_ranks(Z, {0: 1, 2: 3, 5: 3}))

    def test_no_holes(self) -> None:
        self.assertEqual(disc_with_holes_homology(6, 2, HoleSpec(), Z), GradedModule.point(Z))

    def test_bouquet_hole(self) -> None:
        h = disc_with_holes_homology(6, 2, HoleSpec.of([[2, 3]]), Z)
        self.assertEqual(h, GradedModule.from_ranks(Z, {0: 1, 2: 1, 3: 1, 5: 1}))

    def test_sphere_too_large(self) -> None:
        with self.assertRaises(ValueError):
            disc_with_holes_homology(4, 1, HoleSpec.of([[3]]), Z)

    def test_realize(self) -> None:
        self.assertEqual(realize_ranks(6, 2, {2: 3, 5: 3}), HoleSpec.of([[3], [3], [3]]))
        self.assertEqual(realize_ranks(6, 2, {2: 3, 5: 2}), HoleSpec.of([[3, 3], [3]]))
        self.assertEqual(realize_ranks(6, 2, {}), HoleSpec())

    def test_realize_hypotheses(self) -> None:
        with self.assertRaises(HypothesisError) as e:
            realize_ranks(6, 2, {2: 0, 5: 1})
        self.assertEqual(e.exception.deficit, 1)
        with self.assertRaises(HypothesisError):
            realize_ranks(6, 2, {1: 1, 5: 1})
        with self.assertRaises(HypothesisError):
            realize_ranks(6, 2, {2: 1})

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_realize_inverts_homology(self, data: st.DataObject) -> None:
        n = data.draw(st.integers(3, 7))
        k = data.draw(st.integers(1, n - 2))
        ranks = {j: data.draw(st.integers(0, 2)) for j in range(k, n - 1)}
        total = sum(ranks.values())
        ranks[n - 1] = data.draw(st.integers(1, total)) if total else 0
        spec = realize_ranks(n, k, ranks)
        h = disc_with_holes_homology(n, k, spec, Z)
        expected = {j: r for j, r in ranks.items() if r}
        expected[0] = 1
        self.assertEqual(h.ranks(), expected)

    def test_massey_by_degree(self) -> None:
        self.assertEqual(massey_vanish_by_degree(5, 2, {}).status, VerdictStatus.PASS)
        self.assertEqual(massey_vanish_by_degree(6, 2, {}).status, VerdictStatus.UNDECIDED)
        self.assertEqual(massey_vanish_by_degree(7, 3, {}).status, VerdictStatus.PASS)
