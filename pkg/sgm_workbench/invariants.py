"""
Closed-form homology of terms and the disc-with-holes calculus.

Everything is computed over the integers first and moved to the requested
coefficients by universal coefficients at the end.
"""

import dataclasses
import logging
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sgm_workbench.graded_algebra import (
    Coefficients,
    GradedModule,
    change_coefficients,
    graded_kunneth,
    graded_sum,
)
from sgm_workbench.terms import Atom, Bouquet, ConnSum, PolyhedronTerm, Product, atom_types
from sgm_workbench.workbench_utils import (
    HypothesisError,
    TermError,
    Verdict,
    VerdictStatus,
    check_degree,
    get_settings,
)

logger = logging.getLogger("sgm_workbench")

Z = Coefficients.integers()

RankVector = Mapping[int, int]


@dataclasses.dataclass(frozen=True)
class HoleSpec:
    """
    Holes of a disc, each a bouquet of spheres given by their dimensions.

    An empty hole is a point. Sphere summands are numbered globally in order
    of appearance; ``linking`` maps pairs (i, j), i < j, of those numbers to
    their linking integer.
    """

    holes: Tuple[Tuple[int, ...], ...] = ()
    linking: Tuple[Tuple[Tuple[int, int], int], ...] = ()

    def __post_init__(self) -> None:
        holes = []
        for hole in self.holes:
            dims = tuple(int(s) for s in hole)
            if any(s < 0 for s in dims):
                raise ValueError(f"Negative sphere dimension in hole {list(dims)}")
            # S^0 is the one-point set, so it adds nothing to a bouquet.
            holes.append(tuple(s for s in dims if s > 0))
        object.__setattr__(self, "holes", tuple(holes))
        count = len(self.spheres)
        merged: Dict[Tuple[int, int], int] = {}
        for (i, j), value in self.linking:
            if i == j:
                raise ValueError(f"Linking of sphere {i} with itself")
            if not (0 <= i < count and 0 <= j < count):
                raise ValueError(f"Linking pair ({i}, {j}) outside 0..{count - 1}")
            key = (min(i, j), max(i, j))
            if key in merged and merged[key] != value:
                raise ValueError(f"Conflicting linking values for pair {key}")
            merged[key] = int(value)
        object.__setattr__(self, "linking", tuple(sorted(merged.items())))

    @classmethod
    def of(
        cls,
        holes: Sequence[Sequence[int]],
        linking: Optional[Mapping[Tuple[int, int], int]] = None,
    ) -> "HoleSpec":
        return cls(
            tuple(tuple(h) for h in holes),
            tuple((linking or {}).items()),
        )

    @property
    def spheres(self) -> List[Tuple[int, int]]:
        """(hole index, sphere dimension) for every summand, in order."""
        return [(h, s) for h, hole in enumerate(self.holes) for s in hole]

    def linking_number(self, i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        return dict(self.linking).get(key, 0)

    def check_dimensions(self, n: int) -> None:
        for h, s in self.spheres:
            if s >= n - 1:
                raise ValueError(
                    f"Hole {h} has a sphere of dimension {s}; at most {n - 2} fits in a {n}-disc"
                )

    def check_linking(self, n: int) -> None:
        dims = [s for _, s in self.spheres]
        for (i, j), value in self.linking:
            if value and dims[i] + dims[j] != n - 1:
                raise ValueError(
                    f"Linking {value} between spheres of dimensions {dims[i]} and {dims[j]}; "
                    f"only dimensions adding up to {n - 1} link"
                )

    def to_json(self) -> Dict[str, Any]:
        return {
            "holes": [list(h) for h in self.holes],
            "linking": [[i, j, v] for (i, j), v in self.linking],
        }

    @classmethod
    def from_json(cls, data: Any) -> "HoleSpec":
        if isinstance(data, list):
            data = {"holes": data}
        linking = {(int(i), int(j)): int(v) for i, j, v in data.get("linking", [])}
        return cls.of(data.get("holes", []), linking)

    def __str__(self) -> str:
        def hole_text(hole: Tuple[int, ...]) -> str:
            if not hole:
                return "pt"
            return "v".join(f"S{s}" for s in hole)

        return "[" + ", ".join(hole_text(h) for h in self.holes) + "]"


def _reduced_sum(modules: Sequence[GradedModule]) -> GradedModule:
    total = GradedModule.point(Z)
    for h in modules:
        total = graded_sum(total, h.reduced())
    return total


def _integral_homology(term: PolyhedronTerm) -> GradedModule:
    if isinstance(term, Atom):
        return term.atom.homology
    if isinstance(term, Bouquet):
        return _reduced_sum([_integral_homology(p) for p in term.parts])
    if isinstance(term, Product):
        return graded_kunneth(_integral_homology(term.left), _integral_homology(term.right))
    if isinstance(term, ConnSum):
        n = term.dim
        middle = [
            GradedModule(Z, tuple((d, m) for d, m in _integral_homology(p) if 0 < d < n))
            for p in term.parts
        ]
        closed = GradedModule.from_ranks(Z, {0: 1, n: 1})
        for h in middle:
            closed = graded_sum(closed, h)
        return closed
    raise TermError(f"Unknown term node {term!r}")


def homology_of_term(term: PolyhedronTerm, coefficients: Coefficients) -> GradedModule:
    """
    Closed-form homology of a finished term.

    Parameters:
        term: the polyhedron term
        coefficients: coefficient ring of the result

    Returns:
        GradedModule over ``coefficients``
    """
    return change_coefficients(_integral_homology(term), coefficients)


def connectivity_of_term(term: PolyhedronTerm, strict: bool = False) -> int:
    """
    Largest c with reduced integral homology trivial in degrees <= c.

    With a non-simply-connected atom the number is only homological; that is
    logged, or raised when ``strict``.
    """
    loose = [a.name for a in atom_types(term) if not a.simply_connected]
    if loose:
        message = f"Atoms {sorted(set(loose))} are not simply connected; connectivity is homological only"
        if strict:
            raise TermError(message)
        logger.warning(message)
    reduced = _integral_homology(term).reduced()
    if not reduced.by_degree:
        return get_settings().degree_cap
    return reduced.by_degree[0][0] - 1


def disc_with_holes_homology(
    n: int, k: int, holes: HoleSpec, coefficients: Coefficients
) -> GradedModule:
    """
    Homology of D^n minus open regular neighbourhoods of the holes.

    A sphere S^s in a hole contributes a free class in degree n-s-1 (its
    linking sphere); every hole contributes one class in degree n-1.
    """
    if n < 2:
        raise ValueError(f"Disc dimension must be at least 2, got {n}")
    check_degree(n)
    holes.check_dimensions(n)
    ranks: Dict[int, int] = {0: 1}
    for h, s in holes.spheres:
        if s > n - k - 1:
            logger.warning(
                f"Hole {h} sphere S^{s} exceeds n-k-1 = {n - k - 1}; the complement is not {k - 1}-connected"
            )
        ranks[n - s - 1] = ranks.get(n - s - 1, 0) + 1
    if holes.holes:
        ranks[n - 1] = ranks.get(n - 1, 0) + len(holes.holes)
    return GradedModule.from_ranks(coefficients, ranks)


def _check_rank_support(n: int, k: int, ranks: RankVector) -> None:
    for j, r in ranks.items():
        if r < 0:
            raise HypothesisError(f"Negative rank {r} in degree {j}")
        if r and 1 <= j <= k - 1:
            raise HypothesisError(f"Rank {r} in degree {j} below k = {k}")
        if r and j >= n:
            raise HypothesisError(f"Rank {r} in degree {j} at or above n = {n}")


def realize_ranks(n: int, k: int, ranks: RankVector) -> HoleSpec:
    """
    Holes whose complement has the given ranks in degrees 1..n-1.

    One sphere S^{n-j-1} per unit of rank in degree j <= n-2, listed by
    descending dimension and grouped into exactly ranks[n-1] holes; the
    first hole takes the surplus.
    """
    _check_rank_support(n, k, ranks)
    spheres: List[int] = []
    for j in range(1, n - 1):
        spheres.extend([n - j - 1] * ranks.get(j, 0))
    top = ranks.get(n - 1, 0)
    if len(spheres) < top:
        raise HypothesisError(
            f"Sum of ranks in degrees 1..{n - 2} is {len(spheres)}, below rank {top} in degree {n - 1}",
            deficit=top - len(spheres),
        )
    if top == 0:
        if spheres:
            raise HypothesisError(
                f"{len(spheres)} sphere classes but no hole class in degree {n - 1}",
                deficit=1,
            )
        return HoleSpec()
    first = len(spheres) - (top - 1)
    holes = [tuple(spheres[:first])] + [(s,) for s in spheres[first:]]
    spec = HoleSpec(tuple(holes))
    logger.debug(f"Realized ranks {dict(ranks)} by holes {spec}")
    return spec


def massey_vanish_by_degree(n: int, k: int, ranks: RankVector) -> Verdict:
    """Triple products of positive-degree classes start in degree 3k-1."""
    _check_rank_support(n, k, ranks)
    lowest, top = 3 * k - 1, n - 1
    if lowest > top:
        return Verdict(
            "massey by degree",
            VerdictStatus.PASS,
            f"triple Massey products land in degree >= 3k-1 = {lowest} > n-1 = {top}",
        )
    return Verdict(
        "massey by degree",
        VerdictStatus.UNDECIDED,
        f"3k-1 = {lowest} <= n-1 = {top}",
    )
