"""Tests for SIE/SEE labels, the normal form and the root whitelists."""

import unittest

from sgm_workbench.atoms import builtin_atoms
from sgm_workbench.classify import (
    EmbeddingMode,
    check_thm3_holes,
    classify_sie_see,
    classify_thm2_normal_form,
    is_connected_sum_of_s2xs2,
    validate_root_thm4_thm5,
)
from sgm_workbench.invariants import HoleSpec
from sgm_workbench.term_parser import parse_term
from sgm_workbench.workbench_utils import VerdictStatus

ATOMS = builtin_atoms()


class TestSieSee(unittest.TestCase):
    """Labels of immersed and embedded thickenings."""

    def test_plain(self) -> None:
        c = classify_sie_see(parse_term("CS[@S2xS2,@S2xS2]"), "SEE")
        self.assertEqual(c.label, "SEE-(CS[@S2xS2,@S2xS2], {S2xS2})")
        self.assertFalse(c.essentially)
        self.assertTrue(c.requires_smooth_embedding)
        self.assertIs(c.mode, EmbeddingMode.SEE)

    def test_sphere_holes(self) -> None:
        c = classify_sie_see(parse_term("B(S2,S3)"), EmbeddingMode.SIE, [parse_term("S3"), parse_term("B(S1,S1)")])
        self.assertTrue(c.essentially)
        self.assertTrue(c.very_essentially)
        self.assertEqual(c.atom_names, ("S1", "S2", "S3"))
        self.assertTrue(c.label.startswith("very essentially SIE-("))
        self.assertFalse(c.requires_smooth_embedding)
        self.assertIn("holes: S3, B(S1,S1)", str(c))

    def test_non_sphere_hole(self) -> None:
        c = classify_sie_see(parse_term("S4"), "SEE", [parse_term("P(S2,S3)")])
        self.assertTrue(c.essentially)
        self.assertFalse(c.very_essentially)
        self.assertTrue(c.label.startswith("essentially SEE-("))

    def test_generating_set(self) -> None:
        with self.assertRaises(ValueError):
            classify_sie_see(parse_term("S4"), "SEE", [parse_term("S3")], atom_set=["S4"])
        with self.assertRaises(ValueError):
            classify_sie_see(parse_term("S4"), "SEE", atom_set=["S3"])
        c = classify_sie_see(parse_term("S4"), "SEE", atom_set=["S4", "S2"])
        self.assertEqual(c.atom_names, ("S2", "S4"))

    def test_unknown_mode(self) -> None:
        with self.assertRaises(ValueError):
            classify_sie_see(parse_term("S4"), "SXE")


class TestNormalForm(unittest.TestCase):
    """Normal form of (k-1)-connected elementary polyhedra."""

    def test_accepted(self) -> None:
        term = parse_term("B(P(S3,B(S3,S3)),CS[@S2xS2,@S2xS2])")
        verdict = classify_thm2_normal_form(term, 6, 2)
        self.assertEqual(verdict.status, VerdictStatus.PASS)
        self.assertEqual(verdict.detail, "2 bouquet piece(s)")

    def test_atom_not_connected_enough(self) -> None:
        verdict = classify_thm2_normal_form(parse_term("B(S1,S3)"), 6, 2)
        self.assertEqual(verdict.status, VerdictStatus.FAIL)
        self.assertEqual(verdict.witness, "S1")
        verdict = classify_thm2_normal_form(parse_term("S2"), 9, 3)
        self.assertEqual(verdict.status, VerdictStatus.FAIL)

    def test_outside_range(self) -> None:
        verdict = classify_thm2_normal_form(parse_term("P(S3,B(S3,S3))"), 7, 2)
        self.assertEqual(verdict.status, VerdictStatus.NO_CONSTRAINT)
        for text in ("B(S1,S3)", "P(@S2xS2,S3)", "@Wu"):
            with self.subTest(term=text):
                verdict = classify_thm2_normal_form(parse_term(text), 7, 2)
                self.assertEqual(verdict.status, VerdictStatus.NO_CONSTRAINT)

    def test_product_with_manifold_factor(self) -> None:
        verdict = classify_thm2_normal_form(parse_term("P(@S2xS2,S3)"), 6, 2)
        self.assertEqual(verdict.status, VerdictStatus.FAIL)
        self.assertTrue(verdict.detail.startswith("product factor"))

    def test_bad_parameters(self) -> None:
        with self.assertRaises(ValueError):
            classify_thm2_normal_form(parse_term("S2"), 6, 1)


class TestRootWhitelist(unittest.TestCase):
    """Atoms allowed in the roots of low-dimensional thickenings."""

    def test_connected_sums_of_s2xs2(self) -> None:
        self.assertTrue(is_connected_sum_of_s2xs2(ATOMS["S2xS2"]))
        self.assertTrue(is_connected_sum_of_s2xs2(ATOMS["S2xS2#S2xS2"]))
        self.assertFalse(is_connected_sum_of_s2xs2(ATOMS["CP2"]))
        self.assertFalse(is_connected_sum_of_s2xs2(ATOMS["CP2#CP2bar"]))

    def test_dimension_five(self) -> None:
        verdict = validate_root_thm4_thm5([ATOMS["S2xS2"], ATOMS["S3"]], 5, 2, "SEE")
        self.assertEqual(verdict.status, VerdictStatus.PASS)
        verdict = validate_root_thm4_thm5([ATOMS["CP2"]], 5, 2, "SIE")
        self.assertEqual(verdict.status, VerdictStatus.FAIL)
        self.assertEqual(verdict.witness, "CP2")

    def test_dimension_six(self) -> None:
        odd = ATOMS["CP2#CP2bar"]
        self.assertEqual(validate_root_thm4_thm5([odd], 6, 2, "SIE").status, VerdictStatus.PASS)
        self.assertEqual(validate_root_thm4_thm5([odd], 6, 2, "SEE").status, VerdictStatus.FAIL)
        self.assertEqual(validate_root_thm4_thm5([ATOMS["S2xS3"]], 6, 2, "SEE").status, VerdictStatus.PASS)
        for name in ("S2~S3", "Wu"):
            with self.subTest(atom=name):
                verdict = validate_root_thm4_thm5([ATOMS[name]], 6, 2, EmbeddingMode.SEE)
                self.assertEqual(verdict.status, VerdictStatus.FAIL)

    def test_unsupported_parameters(self) -> None:
        with self.assertRaises(ValueError):
            validate_root_thm4_thm5([ATOMS["S2xS2"]], 7, 3, "SEE")
        with self.assertRaises(ValueError):
            validate_root_thm4_thm5([ATOMS["S2xS2"]], 5, 2, "SXE")


class TestHoleDimensions(unittest.TestCase):
    """Spheres in the holes of a very essential disc."""

    def test_holes(self) -> None:
        self.assertEqual(check_thm3_holes(6, 2, HoleSpec.of([[3], [3]])).status, VerdictStatus.PASS)
        verdict = check_thm3_holes(6, 2, HoleSpec.of([[2], [4]]))
        self.assertEqual(verdict.status, VerdictStatus.FAIL)
        self.assertEqual(verdict.witness, (1, 4))
