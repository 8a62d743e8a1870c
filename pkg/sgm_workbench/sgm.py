"""
Source manifolds of special generic maps, computed from the image.

A special generic map f: M^m -> R^n factors through its image W, a compact
n-manifold immersed in R^n. In the trivial-bundle case M is the boundary
of W x D^(m-n+1), that is W x S^(m-n) glued to dW x D^(m-n+1) along
dW x S^(m-n). W is either a boundary connected sum of handles
S^l x D^(n-l) or a disc with holes.
"""

import dataclasses
from enum import Enum
import logging
from typing import Any, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from sgm_workbench.chain_oracle import split_mayer_vietoris_homology
from sgm_workbench.dga import borromean_fixture, triple_massey
from sgm_workbench.graded_algebra import (
    Coefficients,
    FgModule,
    GradedModule,
    change_coefficients,
    cohomology_from_homology,
    graded_sum,
)
from sgm_workbench.invariants import HoleSpec, disc_with_holes_homology
from sgm_workbench.reports import Report, format_homology
from sgm_workbench.rings import check_thm1_vanishing, ring_skeleton
from sgm_workbench.smith import smith_diagonal
from sgm_workbench.workbench_utils import StructuralError, Verdict, VerdictStatus, check_degree

logger = logging.getLogger("sgm_workbench")

Z = Coefficients.integers()

STATED_H2_RANK = 3


class ImageKind(str, Enum):
    HANDLES = "handles"
    HOLES = "holes"


@dataclasses.dataclass(frozen=True)
class SgmImage:
    kind: ImageKind
    n: int
    handles: Tuple[int, ...] = ()
    holes: HoleSpec = HoleSpec()
    embedded: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ImageKind(self.kind))
        if self.n < 1:
            raise ValueError(f"Target dimension must be positive, got {self.n}")
        check_degree(self.n, "Target dimension")
        object.__setattr__(self, "handles", tuple(int(l) for l in self.handles))
        if self.kind is ImageKind.HANDLES:
            for l in self.handles:
                if not 1 <= l <= self.n - 1:
                    raise ValueError(f"Handle index {l} outside 1..{self.n - 1}")
            if self.holes.holes:
                raise ValueError("A handle image carries no holes")
        else:
            if self.handles:
                raise ValueError("A disc-with-holes image carries no handles")
            self.holes.check_dimensions(self.n)
            self.holes.check_linking(self.n)

    @classmethod
    def from_handles(cls, l: Sequence[int], n: int, embedded: bool = True) -> "SgmImage":
        return cls(ImageKind.HANDLES, n, handles=tuple(l), embedded=embedded)

    @classmethod
    def disc_with_holes(cls, n: int, holes: HoleSpec, embedded: bool = True) -> "SgmImage":
        return cls(ImageKind.HOLES, n, holes=holes, embedded=embedded)

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"kind": self.kind.value, "n": self.n, "embedded": self.embedded}
        if self.kind is ImageKind.HANDLES:
            out["l"] = list(self.handles)
        else:
            out.update(self.holes.to_json())
        return out

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "SgmImage":
        kind = ImageKind(data.get("kind", "handles"))
        embedded = bool(data.get("embedded", True))
        if kind is ImageKind.HANDLES:
            return cls.from_handles(data.get("l", []), int(data["n"]), embedded)
        return cls.disc_with_holes(int(data["n"]), HoleSpec.from_json(data), embedded)

    def __str__(self) -> str:
        if self.kind is ImageKind.HANDLES:
            if not self.handles:
                return f"D{self.n}"
            return "bsum(" + ", ".join(f"S{l}xD{self.n - l}" for l in self.handles) + ")"
        return f"D{self.n} minus {self.holes}"


def image_homology(img: SgmImage) -> GradedModule:
    """Integral homology of W."""
    if img.kind is ImageKind.HANDLES:
        ranks: Dict[int, int] = {0: 1}
        for l in img.handles:
            ranks[l] = ranks.get(l, 0) + 1
        return GradedModule.from_ranks(Z, ranks)
    return disc_with_holes_homology(img.n, 1, img.holes, Z)


def _check_source_dimension(img: SgmImage, m: int) -> None:
    if m <= img.n:
        raise ValueError(f"Source dimension m = {m} must exceed n = {img.n}")
    check_degree(m, "Source dimension")


def source_homology(img: SgmImage, m: int, coefficients: Coefficients) -> GradedModule:
    """
    H_j(M) = H_j(W) + H^(m-j)(W).

    The second summand is H_(j-p)(W, dW) with p = m - n, rewritten by
    Lefschetz duality. Everything is computed over Z and moved to the
    requested coefficients at the end.
    """
    _check_source_dimension(img, m)
    h = image_homology(img)
    relative = cohomology_from_homology(h)
    integral = graded_sum(
        h, GradedModule(Z, tuple((m - r, module) for r, module in relative if r <= m))
    )
    duality = check_poincare_duality(integral, m)
    if duality.failed:
        raise StructuralError(f"Source homology of {img} violates duality: {duality.detail}")
    return change_coefficients(integral, coefficients)


def connected_sum_of_sphere_products(
    l: Sequence[int], m: int, coefficients: Optional[Coefficients] = None
) -> GradedModule:
    """Homology of #_j (S^(l_j) x S^(m - l_j)); S^m when ``l`` is empty."""
    coefficients = coefficients or Z
    ranks: Dict[int, int] = {0: 1, m: 1}
    for lj in l:
        if not 1 <= lj <= m - 1:
            raise ValueError(f"Sphere dimension {lj} outside 1..{m - 1}")
        ranks[lj] = ranks.get(lj, 0) + 1
        ranks[m - lj] = ranks.get(m - lj, 0) + 1
    return GradedModule.from_ranks(coefficients, ranks)


def check_poincare_duality(h: GradedModule, m: int) -> Verdict:
    """Free ranks symmetric about m/2, with H_0 and H_m of rank 1."""
    if h.rank(0) != 1 or h.rank(m) != 1:
        return Verdict(
            "poincare duality",
            VerdictStatus.FAIL,
            f"rank H_0 = {h.rank(0)}, rank H_{m} = {h.rank(m)}",
        )
    for j in range(m + 1):
        if h.rank(j) != h.rank(m - j):
            return Verdict(
                "poincare duality",
                VerdictStatus.FAIL,
                f"rank H_{j} = {h.rank(j)} but rank H_{m - j} = {h.rank(m - j)}",
                j,
            )
    return Verdict("poincare duality", VerdictStatus.PASS, f"ranks symmetric about {m}/2")


Key = Tuple[Hashable, ...]
BasedModule = List[Tuple[Key, int]]
SparseMap = Dict[Key, Dict[Key, int]]


def _boundary_model(img: SgmImage) -> Tuple[BasedModule, BasedModule, SparseMap]:
    """
    Free bases of H(W) and H(dW) with the map induced by dW -> W.

    For holes, dW is the outer sphere plus one boundary #(S^s x S^(n-1-s))
    per hole. A sphere's meridian maps to its linking class; its push-off
    maps to the sum of meridians of the spheres it links.
    """
    n = img.n
    if img.kind is ImageKind.HANDLES:
        w: BasedModule = [(("pt",), 0)] + [(("core", j), l) for j, l in enumerate(img.handles)]
        for l in img.handles:
            if l > n - 2:
                raise ValueError(
                    f"Handle S{l}xD{n - l} has a disconnected boundary; the Mayer-Vietoris route needs l <= n-2"
                )
        boundary: BasedModule = [(("b0",), 0), (("top",), n - 1)]
        inclusion: SparseMap = {("b0",): {("pt",): 1}}
        for j, l in enumerate(img.handles):
            boundary += [(("core", j), l), (("fiber", j), n - 1 - l)]
            inclusion[("core", j)] = {("core", j): 1}
        return w, boundary, inclusion

    holes = img.holes
    spheres = holes.spheres
    w = [(("pt",), 0)]
    w += [(("mer", a), n - s - 1) for a, (_, s) in enumerate(spheres)]
    w += [(("hole", i), n - 1) for i in range(len(holes.holes))]
    boundary = [(("outer", 0), 0), (("outer", n - 1), n - 1)]
    inclusion = {
        ("outer", 0): {("pt",): 1},
        ("outer", n - 1): {("hole", i): 1 for i in range(len(holes.holes))},
    }
    for i in range(len(holes.holes)):
        boundary += [(("b0", i), 0), (("top", i), n - 1)]
        inclusion[("b0", i)] = {("pt",): 1}
        inclusion[("top", i)] = {("hole", i): 1}
    for a, (_, s) in enumerate(spheres):
        boundary += [(("mer", a), n - s - 1), (("push", a), s)]
        inclusion[("mer", a)] = {("mer", a): 1}
        linked = {}
        for b, (_, t) in enumerate(spheres):
            if b != a and t == n - 1 - s and holes.linking_number(a, b):
                linked[("mer", b)] = holes.linking_number(a, b)
        inclusion[("push", a)] = linked
    return w, boundary, inclusion


def _times_sphere(module: BasedModule, p: int) -> BasedModule:
    return [((key, 0), d) for key, d in module] + [((key, p), d + p) for key, d in module]


def _degree_keys(module: BasedModule, degree: int) -> List[Key]:
    return [key for key, d in module if d == degree]


def source_homology_mayer_vietoris(
    img: SgmImage, m: int, coefficients: Coefficients
) -> GradedModule:
    """
    H(M) from the Mayer-Vietoris sequence of W x S^p and dW x D^(p+1).

    With phi_j: H_j(dW x S^p) -> H_j(W x S^p) + H_j(dW) built from the
    inclusion matrices, H_j(M) = coker(phi_j) + ker(phi_(j-1)). All groups
    in the sequence are free, so the extension splits.
    """
    _check_source_dimension(img, m)
    if img.n < 2:
        raise ValueError("The Mayer-Vietoris route needs n >= 2")
    p = m - img.n
    w, boundary, inclusion = _boundary_model(img)
    source = _times_sphere(boundary, p)
    target = [(("W",) + key, d) for key, d in _times_sphere(w, p)] + [
        (("B",) + key, d) for key, d in boundary
    ]

    def phi(key: Key) -> Dict[Key, int]:
        inner, e = key
        out = {("W", image, e): c for image, c in inclusion.get(inner, {}).items()}
        if e == 0:
            out[("B",) + inner] = 1
        return out

    diagonals: Dict[int, Tuple[int, ...]] = {}
    sizes: Dict[int, Tuple[int, int]] = {}
    for j in range(m + 1):
        cols = _degree_keys(source, j)
        rows = _degree_keys(target, j)
        row_index = {key: i for i, key in enumerate(rows)}
        matrix = np.zeros((len(rows), len(cols)), dtype=object)
        for c, key in enumerate(cols):
            for image, value in phi(key).items():
                matrix[row_index[image], c] += value
        diagonals[j] = smith_diagonal(matrix)
        sizes[j] = (len(rows), len(cols))
    entries = []
    for j in range(m + 1):
        rows, _ = sizes[j]
        cokernel = FgModule(Z, rows - len(diagonals[j]), tuple(x for x in diagonals[j] if x > 1))
        kernel_rank = sizes[j - 1][1] - len(diagonals[j - 1]) if j > 0 else 0
        entries.append((j, cokernel))
        entries.append((j, FgModule(Z, kernel_rank)))
    integral = GradedModule(Z, tuple(entries))
    logger.debug(f"Mayer-Vietoris homology of the source over {img}: {integral}")
    return change_coefficients(integral, coefficients)


def check_remark1_exclusion(
    m: int, n: int, has_nonvanishing_triple_massey: bool, simply_connected: bool
) -> Verdict:
    """
    Closed simply-connected 7-manifolds with a nonvanishing triple Massey
    product admit no special generic map into R^n for n <= 5.
    """
    if m != 7:
        raise ValueError(f"The exclusion rule is stated for m = 7, got m = {m}")
    if not 1 <= n < m:
        raise ValueError(f"Target dimension must lie in 1..{m - 1}, got {n}")
    if n <= 5 and has_nonvanishing_triple_massey and simply_connected:
        return Verdict(
            "massey exclusion",
            VerdictStatus.FAIL,
            f"no special generic map into R^{n} exists for this source",
            n,
        )
    return Verdict("massey exclusion", VerdictStatus.PASS, "no obstruction from this rule")


@dataclasses.dataclass(frozen=True)
class SourceReport:
    m: int
    n: int
    image: SgmImage
    homology: GradedModule
    checks: Tuple[Verdict, ...] = ()
    notes: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.m <= self.n:
            raise ValueError(f"Source dimension {self.m} must exceed target dimension {self.n}")

    @property
    def failed(self) -> bool:
        return any(v.failed for v in self.checks)

    def to_report(self) -> Report:
        report = Report(f"Source of a special generic map {self.image} -> R^{self.n}, m = {self.m}")
        report.add("Image", str(self.image), "image", self.image.to_json())
        report.payload["m"] = self.m
        report.add("Source homology", format_homology(self.homology), "homology", self.homology.to_json())
        if self.notes:
            report.add("Notes", "\n".join(self.notes), "notes", list(self.notes))
        for check in self.checks:
            report.add_verdict(check)
        return report

    def to_json(self) -> Dict[str, Any]:
        return self.to_report().to_json()

    def __str__(self) -> str:
        return self.to_report().render()


def borromean_image() -> SgmImage:
    """Three pairwise unlinked 3-spheres in D^6 forming the Borromean link."""
    return SgmImage.disc_with_holes(6, HoleSpec.of([[3], [3], [3]]))


def _equal(check: str, left: GradedModule, right: GradedModule, what: str) -> Verdict:
    if left == right:
        return Verdict(check, VerdictStatus.PASS, f"{what}: {left}")
    return Verdict(check, VerdictStatus.FAIL, f"{left} != {right}", what)


def main_thm1_pipeline() -> SourceReport:
    """
    The Borromean source: a closed simply-connected 7-manifold with a
    nonvanishing triple Massey product and a special generic map into R^6.
    """
    img, m = borromean_image(), 7
    logger.info(f"Building the source of {img} with m = {m}")
    formula = source_homology(img, m, Z)
    mayer_vietoris = source_homology_mayer_vietoris(img, m, Z)
    checks: List[Verdict] = []
    for degree in (1, 3):
        status = VerdictStatus.PASS if formula[degree].is_zero else VerdictStatus.FAIL
        checks.append(Verdict(f"H_{degree} vanishes", status, f"H_{degree} = {formula[degree]}"))
    checks.append(_equal("formula vs Mayer-Vietoris", formula, mayer_vietoris, "source homology"))
    checks.append(
        _equal(
            "image vs chain oracle",
            image_homology(img),
            split_mayer_vietoris_homology(img.n, img.holes, Z),
            "homology of W",
        )
    )
    checks.append(check_poincare_duality(formula, m))

    massey = triple_massey(borromean_fixture(), "x1", "x2", "x3")
    nonvanishing = massey.defined and massey.nonvanishing
    checks.append(
        Verdict(
            "triple massey",
            VerdictStatus.PASS if nonvanishing and massey.indeterminacy_trivial else VerdictStatus.FAIL,
            str(massey),
        )
    )
    logger.info(f"Massey product <x1, x2, x3>: {massey}")

    ring = ring_skeleton(cohomology_from_homology(formula), m)
    checks.append(check_thm1_vanishing(ring, m, img.n))
    checks.append(check_remark1_exclusion(m, img.n, nonvanishing, True))

    h2 = formula.rank(2)
    if h2 == STATED_H2_RANK:
        comparison = f"rank H_2 = {h2} agrees with the stated rank {STATED_H2_RANK}"
    else:
        comparison = (
            f"rank H_2 = {h2} by both routes differs from the stated rank {STATED_H2_RANK}; "
            f"the model has H_2(W) of rank {image_homology(img).rank(2)} plus H^5(W) of rank "
            f"{cohomology_from_homology(image_homology(img)).rank(5)}"
        )
    notes = (
        comparison,
        "H_2 is free" if not formula[2].torsion else f"H_2 has torsion {formula[2].torsion}",
        "rule: such a source admits no special generic map into R^n for n = 1, ..., 5",
    )
    return SourceReport(m, img.n, img, formula, tuple(checks), notes)
