"""Tests for generated corpora and the formula-vs-oracle sweeps."""

import unittest

import numpy as np

from sgm_workbench.atoms import builtin_atoms
from sgm_workbench.corpus import (
    corpus_atoms,
    enumerate_terms,
    hole_specs,
    sample_terms,
    sweep_holes,
    sweep_terms,
)
from sgm_workbench.invariants import HoleSpec
from sgm_workbench.terms import atoms_multiset, print_term
from sgm_workbench.workbench_utils import settings_override

ATOMS = builtin_atoms()


class TestCorpus(unittest.TestCase):
    """Enumeration and sampling of terms and hole specifications."""

    def test_corpus_atoms(self) -> None:
        self.assertEqual([a.name for a in corpus_atoms()], ["S1", "S2", "S3", "S4", "S5", "S2xS2"])
        with settings_override(corpus_sphere_dims=(2,)):
            self.assertEqual([a.name for a in corpus_atoms()], ["S2", "S2xS2"])

    def test_enumerate(self) -> None:
        terms = enumerate_terms(2, [ATOMS["S1"], ATOMS["S2"]])
        self.assertEqual(len(terms), 11)
        texts = {print_term(t) for t in terms}
        self.assertIn("CS[S1,S1]", texts)
        self.assertIn("P(S2,S1)", texts)
        self.assertNotIn("CS[S1,S2]", texts)
        with self.assertRaises(ValueError):
            enumerate_terms(0)

    def test_sample_is_reproducible(self) -> None:
        first = sample_terms(10, 3, seed=7)
        self.assertEqual(len(first), 10)
        self.assertEqual(first, sample_terms(10, 3, seed=7))

    def test_hole_specs(self) -> None:
        specs = hole_specs(1, 1, 4)
        self.assertEqual(len(specs), 4)
        self.assertIn(HoleSpec(), specs)
        self.assertIn(HoleSpec.of([[2]]), specs)
        self.assertEqual(len(hole_specs(2, 1, 4)), 10)


class TestSweeps(unittest.TestCase):
    """Closed-form rules agree with the chain oracle on small corpora."""

    def test_terms(self) -> None:
        with settings_override(show_progress=False):
            atoms = [ATOMS["S1"], ATOMS["S2"], ATOMS["S2xS2"]]
            self.assertEqual(sweep_terms(enumerate_terms(2, atoms)), [])
            self.assertEqual(sweep_terms(enumerate_terms(2, [ATOMS["S2"], ATOMS["Wu"]])), [])

    def test_sampled_terms(self) -> None:
        with settings_override(show_progress=False):
            self.assertEqual(sweep_terms(sample_terms(15, 3, seed=3)), [])

    def test_holes(self) -> None:
        with settings_override(show_progress=False):
            for n in (3, 4, 5):
                with self.subTest(n=n):
                    self.assertEqual(sweep_holes(n, hole_specs(2, 2, n)), [])


class TestAcceptanceCorpus(unittest.TestCase):
    """Formula and oracle agree on the full-size corpora over Z, Q, Z/2 and Z/3."""

    def test_terms_up_to_three_atoms(self) -> None:
        with settings_override(show_progress=False):
            terms = enumerate_terms(3)
            self.assertGreater(sum(1 for t in terms if sum(atoms_multiset(t).values()) == 3), 500)
            self.assertEqual(sweep_terms(terms), [])

    def test_sampled_terms_of_four_and_five_atoms(self) -> None:
        atoms = corpus_atoms() + [ATOMS[name] for name in ("Wu", "CP2", "S2xS3")]
        with settings_override(show_progress=False):
            terms = sample_terms(30, 5, atoms, seed=11, min_atoms=4)
            sizes = {sum(atoms_multiset(t).values()) for t in terms}
            self.assertLessEqual(sizes, {4, 5})
            self.assertEqual(sweep_terms(terms), [])
        with self.assertRaises(ValueError):
            sample_terms(1, 3, min_atoms=4)

    def test_all_hole_specs_in_d4(self) -> None:
        with settings_override(show_progress=False):
            specs = hole_specs(3, 3, 4)
            self.assertEqual(len(specs), 286)
            self.assertEqual(sweep_holes(4, specs), [])

    def test_sampled_hole_specs_in_d6_and_d7(self) -> None:
        rng = np.random.default_rng(5)
        with settings_override(show_progress=False):
            for n in (6, 7):
                specs = hole_specs(3, 3, n)
                chosen = [specs[int(i)] for i in rng.choice(len(specs), 60, replace=False)]
                chosen.append(specs[-1])
                with self.subTest(n=n):
                    self.assertEqual(sweep_holes(n, chosen), [])
