"""Tests for coefficient rings and graded modules."""

import unittest

from hypothesis import given, settings
from hypothesis import strategies as st

from sgm_workbench.graded_algebra import (
    Coefficients,
    FgModule,
    GradedModule,
    change_coefficients,
    cohomology_from_homology,
    graded_kunneth,
    module_complement,
    module_sum,
    module_tensor,
    module_tor,
    normalize_invariant_factors,
)
from sgm_workbench.workbench_utils import (
    CoefficientMismatchError,
    DegreeCapError,
    settings_override,
)

Z = Coefficients.integers()
Q = Coefficients.rationals()

modules = st.builds(
    lambda rank, torsion: FgModule(Z, rank, tuple(torsion)),
    st.integers(0, 3),
    st.lists(st.sampled_from([2, 3, 4, 6, 8, 9, 12]), max_size=3),
)


def rp2() -> GradedModule:
    return GradedModule(Z, ((0, FgModule(Z, 1)), (1, FgModule(Z, 0, (2,)))))


class TestCoefficients(unittest.TestCase):
    """Parsing and arithmetic of the coefficient rings."""

    def test_parse(self) -> None:
        self.assertEqual(Coefficients.parse("Z"), Z)
        self.assertEqual(Coefficients.parse(" Q "), Q)
        self.assertEqual(Coefficients.parse("Zp:5"), Coefficients.mod(5))
        self.assertEqual(str(Coefficients.mod(7)), "Zp:7")

    def test_parse_rejects_bad_input(self) -> None:
        for text in ("R", "Zp:4", "Zp:x", "Zp:1"):
            with self.subTest(text=text):
                with self.assertRaises(ValueError):
                    Coefficients.parse(text)

    def test_divide(self) -> None:
        self.assertEqual(Z.divide(6, 3), 2)
        with self.assertRaises(ValueError):
            Z.divide(1, 2)
        self.assertEqual(Coefficients.mod(3).divide(1, 2), 2)
        self.assertTrue(Coefficients.mod(3).is_zero(6))


class TestModules(unittest.TestCase):
    """Direct sums, tensor products and Tor in invariant-factor form."""

    def test_sum(self) -> None:
        self.assertEqual(module_sum(FgModule(Z, 2), FgModule(Z, 1)), FgModule(Z, 3))
        self.assertEqual(
            module_sum(FgModule(Z, 0, (2,)), FgModule(Z, 0, (3,))), FgModule(Z, 0, (6,))
        )
        total = module_sum(FgModule(Z, 1, (4,)), FgModule(Z, 0, (2,)))
        self.assertEqual(total.free_rank, 1)
        self.assertEqual(total.torsion, (2, 4))

    def test_tensor(self) -> None:
        self.assertEqual(module_tensor(FgModule(Z, 2), FgModule(Z, 3)), FgModule(Z, 6))
        self.assertEqual(
            module_tensor(FgModule(Z, 0, (4,)), FgModule(Z, 0, (6,))), FgModule(Z, 0, (2,))
        )
        self.assertEqual(
            module_tensor(FgModule(Z, 1, (2,)), FgModule(Z, 1)), FgModule(Z, 1, (2,))
        )

    def test_tor(self) -> None:
        self.assertTrue(module_tor(FgModule(Z, 5), FgModule(Z, 7)).is_zero)
        self.assertEqual(
            module_tor(FgModule(Z, 0, (2,)), FgModule(Z, 0, (2,))), FgModule(Z, 0, (2,))
        )
        self.assertTrue(module_tor(FgModule(Q, 2), FgModule(Q, 3)).is_zero)

    def test_field_drops_torsion(self) -> None:
        self.assertEqual(FgModule(Q, 1, (2, 3)).torsion, ())

    def test_mismatched_coefficients(self) -> None:
        with self.assertRaises(CoefficientMismatchError):
            module_sum(FgModule(Z, 1), FgModule(Q, 1))

    def test_complement(self) -> None:
        total = FgModule(Z, 3, (2, 12))
        self.assertEqual(module_complement(total, FgModule(Z, 1, (4,))), FgModule(Z, 2, (6,)))
        with self.assertRaises(ValueError):
            module_complement(total, FgModule(Z, 0, (8,)))

    @given(modules, modules, modules)
    @settings(max_examples=50, deadline=None)
    def test_sum_and_tensor_laws(self, a: FgModule, b: FgModule, c: FgModule) -> None:
        self.assertEqual(module_sum(a, b), module_sum(b, a))
        self.assertEqual(module_sum(module_sum(a, b), c), module_sum(a, module_sum(b, c)))
        self.assertEqual(module_tensor(a, b), module_tensor(b, a))
        self.assertEqual(
            module_tensor(module_tensor(a, b), c), module_tensor(a, module_tensor(b, c))
        )

    @given(st.lists(st.integers(1, 60), max_size=5))
    @settings(max_examples=50, deadline=None)
    def test_normalization_is_idempotent(self, factors: list) -> None:
        chain = normalize_invariant_factors(factors)
        self.assertEqual(normalize_invariant_factors(chain), chain)
        for small, large in zip(chain, chain[1:]):
            self.assertEqual(large % small, 0)


class TestGradedModules(unittest.TestCase):
    """Graded modules, Kunneth and universal coefficients."""

    def test_kunneth_spheres(self) -> None:
        s2 = GradedModule.from_ranks(Z, {0: 1, 2: 1})
        s3 = GradedModule.from_ranks(Z, {0: 1, 3: 1})
        self.assertEqual(
            graded_kunneth(s2, s3), GradedModule.from_ranks(Z, {0: 1, 2: 1, 3: 1, 5: 1})
        )

    def test_kunneth_point_is_identity(self) -> None:
        self.assertEqual(graded_kunneth(GradedModule.point(Z), rp2()), rp2())

    def test_kunneth_tor_term(self) -> None:
        z2 = GradedModule(Z, ((1, FgModule(Z, 0, (2,))),))
        product = graded_kunneth(z2, z2)
        self.assertEqual(product[2], FgModule(Z, 0, (2,)))
        self.assertEqual(product[3], FgModule(Z, 0, (2,)))
        self.assertEqual(product.degrees, [2, 3])

    @given(
        st.dictionaries(st.integers(0, 5), st.integers(0, 3), max_size=4),
        st.dictionaries(st.integers(0, 5), st.integers(0, 3), max_size=4),
    )
    @settings(max_examples=50, deadline=None)
    def test_kunneth_dimension_over_a_field(self, a: dict, b: dict) -> None:
        ha = GradedModule.from_ranks(Q, a)
        hb = GradedModule.from_ranks(Q, b)
        self.assertEqual(
            graded_kunneth(ha, hb).total_rank(), ha.total_rank() * hb.total_rank()
        )

    def test_duplicate_degrees_merge(self) -> None:
        h = GradedModule(Z, ((2, FgModule(Z, 1)), (2, FgModule(Z, 2)), (3, FgModule(Z))))
        self.assertEqual(h.ranks(), {2: 3})
        self.assertEqual(h.degrees, [2])

    def test_degree_cap(self) -> None:
        with self.assertRaises(DegreeCapError):
            GradedModule.from_ranks(Z, {40: 1})
        with settings_override(degree_cap=64):
            self.assertEqual(GradedModule.from_ranks(Z, {40: 1}).top_degree, 40)

    def test_reduced(self) -> None:
        s2 = GradedModule.from_ranks(Z, {0: 1, 2: 1})
        self.assertEqual(s2.reduced(), GradedModule.from_ranks(Z, {2: 1}))
        self.assertEqual(s2.reduced().unreduced(), s2)
        with self.assertRaises(ValueError):
            GradedModule.from_ranks(Z, {2: 1}).reduced()

    def test_change_coefficients(self) -> None:
        self.assertEqual(change_coefficients(rp2(), Q), GradedModule.point(Q))
        z2 = Coefficients.mod(2)
        self.assertEqual(
            change_coefficients(rp2(), z2), GradedModule.from_ranks(z2, {0: 1, 1: 1, 2: 1})
        )
        z3 = Coefficients.mod(3)
        self.assertEqual(change_coefficients(rp2(), z3), GradedModule.point(z3))

    def test_cohomology_from_homology(self) -> None:
        self.assertEqual(
            cohomology_from_homology(rp2()),
            GradedModule(Z, ((0, FgModule(Z, 1)), (2, FgModule(Z, 0, (2,))))),
        )

    def test_json(self) -> None:
        data = rp2().to_json()
        self.assertEqual(data, {"0": {"rank": 1, "torsion": []}, "1": {"rank": 0, "torsion": [2]}})
        self.assertEqual(GradedModule.from_json(Z, data), rp2())
        self.assertEqual(
            GradedModule.from_json(Z, {"0": 1, "3": 2}), GradedModule.from_ranks(Z, {0: 1, 3: 2})
        )
