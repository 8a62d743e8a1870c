"""Tests for atoms, polyhedron terms, root sequences and the term parser."""

import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from sgm_workbench.atoms import AtomType, builtin_atoms, load_atom_table, sphere_atom
from sgm_workbench.corpus import enumerate_terms, sample_terms
from sgm_workbench.graded_algebra import Coefficients, GradedModule
from sgm_workbench.term_parser import TermSyntaxError, parse_term, parse_tree
from sgm_workbench.terms import (
    Atom,
    Bouquet,
    CombinationKind,
    ConnSum,
    Product,
    atoms_multiset,
    bouquet,
    check_bits,
    conn_sum,
    iter_nodes,
    normalize_term,
    print_term,
    root_combine,
    root_finish,
    root_new,
)
from sgm_workbench.workbench_utils import TermError, VerdictStatus

ATOMS = builtin_atoms()
S2, S3 = Atom(ATOMS["S2"]), Atom(ATOMS["S3"])
S2XS2 = Atom(ATOMS["S2xS2"])


class TestAtoms(unittest.TestCase):
    """Atom metadata and the atom table."""

    def test_sphere_atom(self) -> None:
        s5 = sphere_atom(5)
        self.assertEqual(s5.connectivity, 4)
        self.assertTrue(s5.standard_sphere)
        self.assertEqual(s5.homology.ranks(), {0: 1, 5: 1})
        self.assertEqual(sphere_atom(0).homology, GradedModule.point(Coefficients.integers()))

    def test_builtin_table(self) -> None:
        for name in ("S0", "S9", "S2xS2", "CP2", "S2~S3", "Wu"):
            self.assertIn(name, ATOMS)
        self.assertEqual(ATOMS["S2xS2"].signature, 0)
        self.assertFalse(ATOMS["S2~S3"].spin)

    def test_inconsistent_metadata(self) -> None:
        z = Coefficients.integers()
        with self.assertRaises(ValueError):
            AtomType("bad", 4, GradedModule.from_ranks(z, {0: 1, 2: 1, 4: 1}), homotopy_sphere=True)
        with self.assertRaises(ValueError):
            AtomType("bad", 3, GradedModule.from_ranks(z, {0: 1, 1: 1, 3: 1}), connectivity=1)
        with self.assertRaises(ValueError):
            AtomType("bad", 3, GradedModule.from_ranks(z, {0: 1, 3: 1}), signature=0)

    def test_load_atom_table(self) -> None:
        entry = {
            "name": "K",
            "dim": 4,
            "homology": {"0": 1, "2": 2, "4": 1},
            "connectivity": 1,
            "spin": False,
            "signature": 0,
        }
        table = load_atom_table([entry])
        self.assertIn("S3", table)
        self.assertEqual(table["K"].homology.rank(2), 2)
        with self.assertRaises(ValueError):
            load_atom_table([dict(entry, colour="red")])


class TestTerms(unittest.TestCase):
    """Term construction, canonical form and bits."""

    def test_bouquet_is_canonical(self) -> None:
        s4 = Atom(ATOMS["S4"])
        self.assertEqual(bouquet(S2, bouquet(S3, s4)), bouquet(bouquet(s4, S3), S2))
        self.assertEqual(print_term(bouquet(S3, S2)), "B(S2,S3)")

    def test_bits(self) -> None:
        self.assertEqual(S2.bit, 1)
        self.assertEqual(bouquet(S2, S3).bit, 0)
        self.assertEqual(Product(S2, S3).bit, 0)
        self.assertEqual(conn_sum(S2XS2, S2XS2).bit, 1)
        term = bouquet(Product(S2, bouquet(S3, S3)), conn_sum(S2XS2, S2XS2))
        self.assertEqual(check_bits(term).status, VerdictStatus.PASS)

    def test_product_of_polyhedra_is_rejected(self) -> None:
        with self.assertRaises(TermError) as e:
            Product(bouquet(S2, S2), bouquet(S3, S3))
        self.assertEqual(e.exception.clause, "(2d2)")

    def test_connected_sum_rules(self) -> None:
        with self.assertRaises(TermError) as e:
            conn_sum(S2, S3)
        self.assertEqual(e.exception.clause, "(2d3)")
        with self.assertRaises(TermError):
            conn_sum(S2, bouquet(S2, S2))
        with self.assertRaises(TermError):
            ConnSum((S2XS2,))

    def test_normalize_drops_sphere_summands(self) -> None:
        s4 = Atom(ATOMS["S4"])
        self.assertEqual(normalize_term(conn_sum(s4, S2XS2)), S2XS2)
        self.assertEqual(normalize_term(conn_sum(s4, s4)), s4)
        term = bouquet(S2, conn_sum(s4, S2XS2, S2XS2))
        self.assertEqual(normalize_term(term), bouquet(S2, conn_sum(S2XS2, S2XS2)))

    def test_iter_nodes(self) -> None:
        term = Product(S2, bouquet(S3, S3))
        self.assertEqual(len(list(iter_nodes(term))), 5)
        self.assertEqual(atoms_multiset(term), {"S2": 1, "S3": 2})


class TestRootSequences(unittest.TestCase):
    """The three-step combination procedure."""

    def test_new(self) -> None:
        self.assertEqual(len(root_new([ATOMS["S3"]])), 1)
        self.assertEqual(len(root_new([ATOMS["S2"], ATOMS["S2"], ATOMS["S3"]])), 3)
        with self.assertRaises(TermError):
            root_new([])

    def test_bouquet_step(self) -> None:
        r = root_combine(root_new([ATOMS["S2"], ATOMS["S3"]]), 0, 1, "bouquet")
        self.assertEqual(r.entries, ((bouquet(S2, S3), 0),))
        term, traces = root_finish(r)
        self.assertEqual(term, bouquet(S2, S3))
        self.assertEqual(len(traces), 2)
        self.assertTrue(all(t.special for t in traces))

    def test_connected_sum_step(self) -> None:
        r = root_combine(root_new([ATOMS["S2"], ATOMS["S2"]]), 0, 1, CombinationKind.CONNSUM)
        self.assertEqual(r.entries, ((conn_sum(S2, S2), 1),))
        self.assertEqual(root_finish(r)[1], ())

    def test_product_of_two_polyhedra(self) -> None:
        r = root_new([ATOMS["S2"], ATOMS["S3"], ATOMS["S2"], ATOMS["S3"]])
        r = root_combine(r, 0, 1, "bouquet")
        r = root_combine(r, 0, 1, "bouquet")
        with self.assertRaises(TermError) as e:
            root_combine(r, 0, 1, "product")
        self.assertEqual(e.exception.clause, "(2d2)")

    def test_index_errors(self) -> None:
        r = root_new([ATOMS["S2"], ATOMS["S3"]])
        for k1, k2 in ((1, 0), (0, 2), (-1, 1), (1, 1)):
            with self.assertRaises(TermError):
                root_combine(r, k1, k2, "bouquet")

    def test_unfinished(self) -> None:
        with self.assertRaises(TermError):
            root_finish(root_new([ATOMS["S2"], ATOMS["S3"], ATOMS["S4"]]))

    @given(
        st.lists(st.sampled_from(["S1", "S2", "S3", "S2xS2"]), min_size=1, max_size=5),
        st.lists(st.tuples(st.integers(0, 10), st.integers(0, 10), st.sampled_from(list(CombinationKind)))),
    )
    @settings(max_examples=60, deadline=None)
    def test_root_invariants(self, names: list, steps: list) -> None:
        r = root_new([ATOMS[n] for n in names])
        steps = iter(steps)
        while len(r) > 1:
            i, j, kind = next(steps, (0, 1, CombinationKind.BOUQUET))
            k1, k2 = sorted((i % len(r), j % len(r)))
            if k1 == k2:
                k1, k2 = 0, len(r) - 1
            try:
                r = root_combine(r, k1, k2, kind)
            except TermError:
                r = root_combine(r, k1, k2, CombinationKind.BOUQUET)
        term, traces = root_finish(r)
        self.assertEqual(atoms_multiset(term), r.root_multiset())
        trace_steps = sum(1 for h in r.history if h.kind is not CombinationKind.CONNSUM)
        self.assertEqual(len(traces), 2 * trace_steps)
        self.assertEqual(check_bits(term).status, VerdictStatus.PASS)


class TestTermParser(unittest.TestCase):
    """Surface syntax."""

    def test_examples(self) -> None:
        self.assertEqual(parse_term("B(S2,S3)"), bouquet(S2, S3))
        self.assertEqual(parse_term("CS[@S2xS2, @S2xS2]"), conn_sum(S2XS2, S2XS2))
        self.assertEqual(parse_term("P(S2,B(S3,S3))"), Product(S2, bouquet(S3, S3)))
        self.assertIsInstance(parse_term("@S2xS2#S2xS2"), Atom)

    def test_tree(self) -> None:
        self.assertEqual(parse_tree("B(S2,@CP2)"), ["B", ["S", "2"], ["@", "CP2"]])

    def test_clause_errors(self) -> None:
        with self.assertRaises(TermError) as e:
            parse_term("P(B(S2,S2),B(S3,S3))")
        self.assertEqual(e.exception.clause, "(2d2)")
        with self.assertRaises(TermError):
            parse_term("@NoSuchAtom")

    def test_syntax_errors(self) -> None:
        for text in ("B(S2", "S", "Q(S2,S3)", "B(S2,S3))"):
            with self.subTest(text=text):
                with self.assertRaises(TermSyntaxError):
                    parse_term(text)

    def test_sphere_outside_the_table(self) -> None:
        self.assertEqual(parse_term("S12").dim, 12)

    def test_round_trip_enumerated(self) -> None:
        for term in enumerate_terms(2):
            self.assertEqual(parse_term(print_term(term)), term)

    @given(st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_round_trip_sampled(self, seed: int) -> None:
        for term in sample_terms(5, 4, seed=seed):
            text = print_term(term)
            self.assertEqual(parse_term(text), term)
            self.assertEqual(print_term(parse_term(text)), text)


class TestBouquetTypes(unittest.TestCase):
    """Node classes directly."""

    def test_bouquet_needs_two_parts(self) -> None:
        with self.assertRaises(TermError):
            Bouquet((S2,))
