"""
Brute-force chain-level models used to cross-check the closed-form rules.

Chain groups are free with a fixed cell order; cell 0 in degree 0 is the base
point wherever a wedge needs one. All arithmetic is exact.
"""

import dataclasses
import itertools
import logging
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from sgm_workbench.atoms import AtomType, builtin_atoms
from sgm_workbench.graded_algebra import (
    Coefficients,
    FgModule,
    GradedModule,
    graded_complement,
)
from sgm_workbench.invariants import HoleSpec
from sgm_workbench.rings import UNIT, CohomologyRing, Combination, RingLabel
from sgm_workbench.smith import (
    IntegerMatrix,
    LinearSolver,
    kernel_basis,
    matmul,
    reduce_vector,
    smith_decomposition,
    smith_diagonal,
)
from sgm_workbench.terms import Atom, Bouquet, ConnSum, PolyhedronTerm, Product
from sgm_workbench.workbench_utils import StructuralError, check_degree, get_settings

logger = logging.getLogger("sgm_workbench")

Z = Coefficients.integers()


@dataclasses.dataclass(frozen=True)
class ChainComplex:
    """boundaries[d] maps degree-d chains to degree-(d-1) chains; boundaries[0] has no rows."""

    boundaries: Tuple[IntegerMatrix, ...]

    def __post_init__(self) -> None:
        if not self.boundaries:
            raise ValueError("A chain complex needs at least degree 0")
        check_degree(len(self.boundaries) - 1, "Chain complex top degree")
        if self.boundaries[0].rows != 0:
            raise ValueError("boundaries[0] must map to the zero group")
        for d in range(1, len(self.boundaries)):
            if self.boundaries[d].rows != self.boundaries[d - 1].cols:
                raise ValueError(
                    f"boundaries[{d}] has {self.boundaries[d].rows} rows, "
                    f"expected {self.boundaries[d - 1].cols}"
                )
            if d >= 2:
                square = matmul(self.boundaries[d - 1].array(), self.boundaries[d].array())
                if np.any(square != 0):
                    raise StructuralError(f"Boundary squares to nonzero in degree {d}")

    @property
    def top_degree(self) -> int:
        return len(self.boundaries) - 1

    @property
    def ranks(self) -> List[int]:
        return [b.cols for b in self.boundaries]

    def boundary(self, d: int) -> np.ndarray:
        if d < 0 or d > self.top_degree:
            rows = self.ranks[d - 1] if 0 < d <= self.top_degree + 1 else 0
            cols = self.ranks[d] if 0 <= d <= self.top_degree else 0
            return np.zeros((rows, cols), dtype=object)
        return self.boundaries[d].array()

    def to_json(self) -> Dict[str, Any]:
        return {
            "ranks": self.ranks,
            "boundaries": [b.to_json() for b in self.boundaries],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "ChainComplex":
        boundaries = data["boundaries"]
        ranks = data.get("ranks")
        if ranks is None:
            # Column counts are implied by the next matrix's rows, or by a non-empty top.
            ranks = [len(b) for b in boundaries[1:]]
            if not boundaries[-1] or not boundaries[-1][0]:
                raise ValueError("Cannot infer the top chain rank; give \"ranks\" explicitly")
            ranks.append(len(boundaries[-1][0]))
        matrices = [IntegerMatrix.zeros(0, ranks[0])]
        for d in range(1, len(boundaries)):
            rows = boundaries[d]
            matrices.append(
                IntegerMatrix.from_rows(rows, ranks[d]) if rows else IntegerMatrix.zeros(ranks[d - 1], ranks[d])
            )
        return cls(tuple(matrices))


def build_complex(ranks: Sequence[int], maps: Mapping[int, np.ndarray]) -> ChainComplex:
    """Complex with the given chain ranks; degrees missing from ``maps`` get zero boundaries."""
    ranks = list(ranks)
    while len(ranks) > 1 and ranks[-1] == 0:
        ranks.pop()
    boundaries = [IntegerMatrix.zeros(0, ranks[0])]
    for d in range(1, len(ranks)):
        if d in maps:
            boundaries.append(IntegerMatrix.from_array(maps[d]))
        else:
            boundaries.append(IntegerMatrix.zeros(ranks[d - 1], ranks[d]))
    return ChainComplex(tuple(boundaries))


def homology(c: ChainComplex, coefficients: Coefficients) -> GradedModule:
    """ker(d_d) / im(d_{d+1}) per degree, by Smith normal form."""
    diagonals = [smith_diagonal(c.boundaries[d]) for d in range(c.top_degree + 1)]
    entries = []
    for d in range(c.top_degree + 1):
        outgoing = diagonals[d]
        incoming = diagonals[d + 1] if d < c.top_degree else ()
        rank_out = sum(1 for x in outgoing if not coefficients.is_zero(x))
        rank_in = sum(1 for x in incoming if not coefficients.is_zero(x))
        free = c.ranks[d] - rank_out - rank_in
        torsion = () if coefficients.is_field else tuple(x for x in incoming if x > 1)
        entries.append((d, FgModule(coefficients, free, torsion)))
    return GradedModule(coefficients, tuple(entries))


def point_complex() -> ChainComplex:
    return build_complex([1], {})


def complex_for_sphere(d: int) -> ChainComplex:
    """One 0-cell and one d-cell; S^0 is the one-point set."""
    if d < 0:
        raise ValueError(f"Sphere dimension must be non-negative, got {d}")
    check_degree(d, "Sphere dimension")
    if d == 0:
        return point_complex()
    return build_complex([1] + [0] * (d - 1) + [1], {})


def complex_tensor(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Tensor complex with d(x y) = dx y + (-1)^{|x|} x dy."""
    top = check_degree(a.top_degree + b.top_degree, "Tensor complex degree")
    cells: List[List[Tuple[int, int, int, int]]] = []
    for d in range(top + 1):
        degree_cells = []
        for i in range(max(0, d - b.top_degree), min(d, a.top_degree) + 1):
            j = d - i
            degree_cells.extend(
                (i, x, j, y) for x in range(a.ranks[i]) for y in range(b.ranks[j])
            )
        cells.append(degree_cells)
    index = [{cell: n for n, cell in enumerate(degree_cells)} for degree_cells in cells]
    maps: Dict[int, np.ndarray] = {}
    for d in range(1, top + 1):
        matrix = np.zeros((len(cells[d - 1]), len(cells[d])), dtype=object)
        for col, (i, x, j, y) in enumerate(cells[d]):
            if i >= 1:
                column = a.boundary(i)[:, x]
                for x2 in np.nonzero(column != 0)[0]:
                    matrix[index[d - 1][(i - 1, int(x2), j, y)], col] += column[x2]
            if j >= 1:
                column = b.boundary(j)[:, y]
                sign = -1 if i % 2 else 1
                for y2 in np.nonzero(column != 0)[0]:
                    matrix[index[d - 1][(i, x, j - 1, int(y2))], col] += sign * column[y2]
        maps[d] = matrix
    return build_complex([len(cs) for cs in cells], maps)


def _glue(complexes: Sequence[ChainComplex], merge_base: bool) -> Tuple[ChainComplex, List[List[int]]]:
    """
    Block sum of the complexes, identifying their base 0-cells when
    ``merge_base``. Also returns the offset of each complex per degree.
    """
    top = max(c.top_degree for c in complexes)
    offsets: List[List[int]] = []
    ranks = [0] * (top + 1)
    if merge_base:
        ranks[0] = 1
    for c in complexes:
        offsets.append(list(ranks))
        for d in range(top + 1):
            if d <= c.top_degree:
                ranks[d] += c.ranks[d] - (1 if merge_base and d == 0 else 0)

    def position(which: int, d: int, cell: int) -> int:
        if merge_base and d == 0:
            return 0 if cell == 0 else offsets[which][0] + cell - 1
        return offsets[which][d] + cell

    maps: Dict[int, np.ndarray] = {}
    for d in range(1, top + 1):
        matrix = np.zeros((ranks[d - 1], ranks[d]), dtype=object)
        for which, c in enumerate(complexes):
            if d > c.top_degree:
                continue
            block = c.boundary(d)
            for row, col in zip(*np.nonzero(block != 0)):
                matrix[position(which, d - 1, int(row)), position(which, d, int(col))] += block[row, col]
        maps[d] = matrix
    return build_complex(ranks, maps), offsets


def complex_wedge(complexes: Sequence[ChainComplex]) -> ChainComplex:
    if not complexes:
        raise ValueError("Wedge of an empty list")
    return _glue(complexes, merge_base=True)[0]


def complex_disjoint_union(complexes: Sequence[ChainComplex]) -> ChainComplex:
    if not complexes:
        raise ValueError("Disjoint union of an empty list")
    return _glue(complexes, merge_base=False)[0]


def fundamental_cycle(c: ChainComplex) -> np.ndarray:
    """The generator of the top-degree cycles of a closed orientable model."""
    cycles = kernel_basis(c.boundary(c.top_degree), Z)
    if len(cycles) != 1:
        raise ValueError(
            f"Top degree {c.top_degree} has {len(cycles)} independent cycles; "
            "a closed connected orientable model has exactly one"
        )
    return cycles[0]


def complex_connected_sum(complexes: Sequence[ChainComplex]) -> ChainComplex:
    """
    Delete one top cell from each summand and glue in a single new top cell.

    In summand i pick a top cell s_i with coefficient e_i = +-1 in the
    fundamental cycle; the new cell t has boundary sum_i e_i d(s_i).
    """
    if len(complexes) < 2:
        raise ValueError("A connected sum needs at least two summands")
    n = complexes[0].top_degree
    if n < 1 or any(c.top_degree != n for c in complexes):
        raise ValueError(
            f"Connected sum needs summands of one positive dimension, got {[c.top_degree for c in complexes]}"
        )
    picks = []
    for which, c in enumerate(complexes):
        z = fundamental_cycle(c)
        units = [i for i, x in enumerate(z) if x in (1, -1)]
        if not units:
            raise ValueError(f"Summand {which} has no top cell with coefficient +-1 in its fundamental cycle")
        picks.append((units[0], int(z[units[0]])))
    wedge, offsets = _glue(complexes, merge_base=True)
    top = wedge.boundary(n)
    removed = [offsets[which][n] + cell for which, (cell, _) in enumerate(picks)]
    glued = sum(
        (sign * top[:, offsets[which][n] + cell] for which, (cell, sign) in enumerate(picks)),
        np.zeros(top.shape[0], dtype=object),
    )
    keep = [col for col in range(top.shape[1]) if col not in removed]
    new_top = np.concatenate((top[:, keep], glued.reshape(-1, 1)), axis=1)
    maps = {d: wedge.boundary(d) for d in range(1, n)}
    maps[n] = new_top
    ranks = wedge.ranks[:n] + [new_top.shape[1]]
    return build_complex(ranks, maps)


def complex_realizing(h: GradedModule) -> ChainComplex:
    """Minimal cellular model of integral homology: Z/t in degree d is d(b) = t a."""
    if h.coefficients != Z:
        raise ValueError(f"Realizing complexes need integral homology, got {h.coefficients}")
    if h[0].free_rank < 1:
        raise ValueError("Realizing complexes need a free class in degree 0")
    top = h.top_degree + (1 if h[h.top_degree].torsion else 0)
    # Cells in degree d: free generators, then torsion generators a, then the
    # cells b killing the torsion of degree d-1.
    ranks = []
    for d in range(top + 1):
        below = len(h[d - 1].torsion) if d >= 1 else 0
        ranks.append(h[d].free_rank + len(h[d].torsion) + below)
    maps: Dict[int, np.ndarray] = {}
    for d in range(1, top + 1):
        matrix = np.zeros((ranks[d - 1], ranks[d]), dtype=object)
        lower = h[d - 1]
        first_b = h[d].free_rank + len(h[d].torsion)
        for k, t in enumerate(lower.torsion):
            matrix[lower.free_rank + k, first_b + k] = t
        maps[d] = matrix
    return build_complex(ranks, maps)


def _cp2_complex() -> ChainComplex:
    return build_complex([1, 0, 1, 0, 1], {})


def _s2xs2_complex() -> ChainComplex:
    return complex_tensor(complex_for_sphere(2), complex_for_sphere(2))


# Cell structures of the named built-in atoms, independent of their stored homology.
CELL_MODELS: Dict[str, Callable[[], ChainComplex]] = {
    "S2xS2": _s2xs2_complex,
    "S2xS2#S2xS2": lambda: complex_connected_sum([_s2xs2_complex(), _s2xs2_complex()]),
    "CP2": _cp2_complex,
    "CP2#CP2bar": lambda: complex_connected_sum([_cp2_complex(), _cp2_complex()]),
    "S2xS3": lambda: complex_tensor(complex_for_sphere(2), complex_for_sphere(3)),
    # Sphere bundle over S^2: one cell each in degrees 0, 2, 3, 5.
    "S2~S3": lambda: build_complex([1, 0, 1, 1, 0, 1], {}),
    # SU(3)/SO(3): the 3-cell is attached to the 2-cell with degree 2.
    "Wu": lambda: build_complex([1, 0, 1, 1, 0, 1], {3: np.array([[2]], dtype=object)}),
}


def complex_for_atom(atom: AtomType) -> ChainComplex:
    """
    Cellular model of an atom.

    Spheres and the built-in named atoms use their own cell structures; other
    atoms (from user tables, or overriding a built-in) fall back to the
    minimal complex realizing their stated homology.
    """
    if atom.homotopy_sphere:
        return complex_for_sphere(atom.dim)
    if atom.name in CELL_MODELS and builtin_atoms().get(atom.name) == atom:
        return CELL_MODELS[atom.name]()
    return complex_realizing(atom.homology)


def complex_for_term(term: PolyhedronTerm) -> ChainComplex:
    if isinstance(term, Atom):
        return complex_for_atom(term.atom)
    if isinstance(term, Bouquet):
        return complex_wedge([complex_for_term(p) for p in term.parts])
    if isinstance(term, Product):
        return complex_tensor(complex_for_term(term.left), complex_for_term(term.right))
    if isinstance(term, ConnSum):
        return complex_connected_sum([complex_for_term(p) for p in term.parts])
    raise ValueError(f"Unknown term node {term!r}")


def boundary_of_thickened_hole(n: int, hole: Sequence[int]) -> ChainComplex:
    """
    Boundary of a regular neighbourhood of one hole in R^n.

    A bouquet of spheres S^s thickens to a boundary connected sum of
    S^s x D^{n-s}, whose boundary is the connected sum of the S^s x S^{n-s-1};
    a point hole gives S^{n-1}.
    """
    for s in hole:
        if not 0 <= s <= n - 1:
            raise ValueError(f"Sphere dimension {s} outside 0..{n - 1} for n = {n}")
    pieces = [
        complex_tensor(complex_for_sphere(s), complex_for_sphere(n - s - 1))
        for s in hole
        if s > 0
    ]
    if not pieces:
        return complex_for_sphere(n - 1)
    if len(pieces) == 1:
        return pieces[0]
    return complex_connected_sum(pieces)


def _thickened_hole(hole: Sequence[int]) -> ChainComplex:
    spheres = [complex_for_sphere(s) for s in hole if s > 0]
    if not spheres:
        return point_complex()
    return complex_wedge(spheres)


def split_mayer_vietoris_homology(n: int, holes: HoleSpec, coefficients: Coefficients) -> GradedModule:
    """
    Disc-with-holes homology from the split exact sequence
    H~(dN) = H~(N) + H~(X), with dN and N computed at chain level.
    """
    holes.check_dimensions(n)
    if not holes.holes:
        return GradedModule.point(coefficients)
    boundary = complex_disjoint_union([boundary_of_thickened_hole(n, h) for h in holes.holes])
    thickened = complex_disjoint_union([_thickened_hole(h) for h in holes.holes])
    complement = graded_complement(
        homology(boundary, coefficients).reduced(), homology(thickened, coefficients).reduced()
    )
    logger.debug(f"Split Mayer-Vietoris over {len(holes.holes)} holes: {complement}")
    return complement.unreduced()


@dataclasses.dataclass(frozen=True)
class OrderedSimplicialComplex:
    vertices: Tuple[int, ...]
    simplices: FrozenSet[Tuple[int, ...]]

    def __post_init__(self) -> None:
        vertices = tuple(sorted(set(self.vertices)))
        known = set(vertices)
        simplices = set()
        for simplex in self.simplices:
            ordered = tuple(sorted(simplex))
            if len(set(ordered)) != len(ordered) or not ordered:
                raise ValueError(f"Bad simplex {simplex}")
            if not set(ordered) <= known:
                raise ValueError(f"Simplex {simplex} uses unknown vertices")
            simplices.add(ordered)
        for simplex in simplices:
            for i in range(len(simplex)):
                face = simplex[:i] + simplex[i + 1 :]
                if face and face not in simplices:
                    raise ValueError(f"Face {face} of {simplex} is missing")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "simplices", frozenset(simplices))

    @classmethod
    def from_maximal(cls, maximal: Iterable[Sequence[int]]) -> "OrderedSimplicialComplex":
        simplices = set()
        for simplex in maximal:
            simplex = tuple(sorted(simplex))
            for size in range(1, len(simplex) + 1):
                simplices.update(itertools.combinations(simplex, size))
        vertices = {v for s in simplices for v in s}
        return cls(tuple(vertices), frozenset(simplices))

    @property
    def dimension(self) -> int:
        return max(len(s) for s in self.simplices) - 1

    def by_dimension(self, d: int) -> List[Tuple[int, ...]]:
        return sorted(s for s in self.simplices if len(s) == d + 1)

    def chain_complex(self) -> ChainComplex:
        """Simplicial chains, d[v0..vd] = sum (-1)^i [.. vi-hat ..]."""
        cells = [self.by_dimension(d) for d in range(self.dimension + 1)]
        index = [{s: i for i, s in enumerate(cs)} for cs in cells]
        maps = {}
        for d in range(1, self.dimension + 1):
            matrix = np.zeros((len(cells[d - 1]), len(cells[d])), dtype=object)
            for col, simplex in enumerate(cells[d]):
                for i in range(d + 1):
                    face = simplex[:i] + simplex[i + 1 :]
                    matrix[index[d - 1][face], col] += -1 if i % 2 else 1
            maps[d] = matrix
        return build_complex([len(cs) for cs in cells], maps)

    def to_json(self) -> List[List[int]]:
        return [list(s) for s in sorted(self.simplices, key=lambda s: (len(s), s))]

    @classmethod
    def from_json(cls, data: Iterable[Sequence[int]]) -> "OrderedSimplicialComplex":
        return cls.from_maximal(data)


def simplex_boundary(d: int) -> OrderedSimplicialComplex:
    """Boundary of the (d+1)-simplex, a triangulated S^d."""
    return OrderedSimplicialComplex.from_maximal(itertools.combinations(range(d + 2), d + 1))


def torus7() -> OrderedSimplicialComplex:
    """Seven-vertex torus."""
    triangles = []
    for i in range(7):
        triangles.append((i, (i + 1) % 7, (i + 3) % 7))
        triangles.append((i, (i + 2) % 7, (i + 3) % 7))
    return OrderedSimplicialComplex.from_maximal(triangles)


def rp2_6() -> OrderedSimplicialComplex:
    """Six-vertex real projective plane."""
    return OrderedSimplicialComplex.from_maximal(
        [
            (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
            (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3),
        ]
    )


def _staircases(p: int, q: int) -> Iterable[List[Tuple[int, int]]]:
    """Monotone lattice paths from (0,0) to (p,q)."""
    for rights in itertools.combinations(range(p + q), p):
        i = j = 0
        path = [(0, 0)]
        for step in range(p + q):
            if step in rights:
                i += 1
            else:
                j += 1
            path.append((i, j))
        yield path


def simplicial_product(
    k: OrderedSimplicialComplex, l: OrderedSimplicialComplex
) -> OrderedSimplicialComplex:
    """Staircase triangulation of K x L, vertices renumbered in lexicographic order."""
    def maximal(c: OrderedSimplicialComplex) -> List[Tuple[int, ...]]:
        return [s for s in c.simplices if not any(set(s) < set(t) for t in c.simplices)]

    pairs = sorted(itertools.product(k.vertices, l.vertices))
    number = {pair: i for i, pair in enumerate(pairs)}
    simplices = []
    for sigma in maximal(k):
        for tau in maximal(l):
            for path in _staircases(len(sigma) - 1, len(tau) - 1):
                simplices.append(tuple(number[(sigma[i], tau[j])] for i, j in path))
    return OrderedSimplicialComplex.from_maximal(simplices)


class _Cohomology:
    """Cocycle representatives and class coordinates in one degree."""

    def __init__(
        self,
        cochain_in: np.ndarray,
        cochain_out: np.ndarray,
        coefficients: Coefficients,
    ) -> None:
        self.coefficients = coefficients
        size = cochain_in.shape[0]
        decomposition = smith_decomposition(cochain_in)
        assert decomposition.left_inverse is not None
        boundary_directions = set()
        for i, d in enumerate(decomposition.diagonal):
            if coefficients.is_unit(d):
                boundary_directions.add(i)
            elif not coefficients.is_zero(d):
                raise ValueError(
                    f"Cohomology over {coefficients} has torsion; compute over a field instead"
                )
        free = [i for i in range(size) if i not in boundary_directions]
        complement = decomposition.left_inverse[:, free] if free else np.zeros((size, 0), dtype=object)
        restricted = matmul(cochain_out, complement)
        representatives = []
        for v in kernel_basis(restricted, coefficients) if free else []:
            rep = reduce_vector(matmul(complement, v.reshape(-1, 1)).reshape(-1), coefficients)
            nonzero = [x for x in rep if not coefficients.is_zero(x)]
            if nonzero and coefficients.reduce(-nonzero[0]) == 1:
                rep = reduce_vector(-rep, coefficients)
            representatives.append(rep)
        self.representatives = representatives
        if representatives:
            columns = np.stack(representatives, axis=1)
        else:
            columns = np.zeros((size, 0), dtype=object)
        self._solver = LinearSolver(np.concatenate((columns, cochain_in), axis=1), coefficients)

    def coordinates(self, cocycle: np.ndarray) -> List[Any]:
        solution = self._solver.solve(cocycle)
        if solution is None:
            raise StructuralError("Cup product of cocycles is not a cocycle")
        return [self.coefficients.reduce(x) for x in solution[: len(self.representatives)]]


def simplicial_cup_product(k: OrderedSimplicialComplex, coefficients: Coefficients) -> CohomologyRing:
    """
    Cohomology ring from the front-face/back-face cochain product.

    Parameters:
        k: ordered simplicial complex of dimension <= the configured cap
        coefficients: a field, or Z when the cohomology is torsion-free

    Returns:
        CohomologyRing with one label per representative cocycle
    """
    cap = get_settings().simplicial_dim_cap
    if k.dimension > cap:
        raise ValueError(f"Complex of dimension {k.dimension} exceeds the cap {cap}")
    chains = k.chain_complex()
    top = chains.top_degree
    if not coefficients.is_field and not homology(chains, coefficients).is_free:
        raise ValueError("Integral cohomology has torsion; compute over a field instead")
    cells = [k.by_dimension(d) for d in range(top + 1)]
    index = [{s: i for i, s in enumerate(cs)} for cs in cells]
    # Coboundary into degree d is the transpose of the boundary out of degree d.
    coboundary = [chains.boundary(d).T for d in range(top + 2)]
    degrees = [
        _Cohomology(coboundary[d], coboundary[d + 1], coefficients)
        for d in range(top + 1)
    ]
    labels: Dict[Tuple[int, int], RingLabel] = {}
    for d, group in enumerate(degrees):
        for i in range(len(group.representatives)):
            labels[(d, i)] = RingLabel(d, i + 1)
    if len(degrees[0].representatives) != 1:
        raise ValueError("Cup products need a connected complex")

    def cup(alpha: np.ndarray, p: int, beta: np.ndarray, q: int) -> np.ndarray:
        out = np.zeros(len(cells[p + q]), dtype=object)
        for n, simplex in enumerate(cells[p + q]):
            front = alpha[index[p][simplex[: p + 1]]]
            if front == 0:
                continue
            out[n] = front * beta[index[q][simplex[p:]]]
        return reduce_vector(out, coefficients)

    products: Dict[Tuple[RingLabel, RingLabel], Combination] = {}
    for (p, i), x in labels.items():
        for (q, j), y in labels.items():
            if p + q > top:
                continue
            product = cup(degrees[p].representatives[i], p, degrees[q].representatives[j], q)
            coordinates = degrees[p + q].coordinates(product)
            products[(x, y)] = {
                RingLabel(p + q, r + 1): c for r, c in enumerate(coordinates) if c != 0
            }
    ring = CohomologyRing(coefficients, top, tuple(labels.values()), products)
    if ring.product(UNIT, UNIT) != {UNIT: 1}:
        raise StructuralError("Degree-0 representative is not the unit")
    return ring


def oracle_homology_of_term(term: PolyhedronTerm, coefficients: Coefficients) -> GradedModule:
    return homology(complex_for_term(term), coefficients)

