"""Classification of elementary polyhedra and their embedded thickenings."""

import dataclasses
from enum import Enum
import logging
from typing import Iterable, List, Optional, Sequence, Set, Tuple, Union

from sgm_workbench.atoms import AtomType
from sgm_workbench.invariants import HoleSpec
from sgm_workbench.terms import Atom, Bouquet, ConnSum, PolyhedronTerm, Product, atom_types
from sgm_workbench.workbench_utils import Verdict, VerdictStatus, allowed_vals

logger = logging.getLogger("sgm_workbench")


class EmbeddingMode(str, Enum):
    SIE = "SIE"
    SEE = "SEE"


@dataclasses.dataclass(frozen=True)
class Classification:
    mode: EmbeddingMode
    host: PolyhedronTerm
    holes: Tuple[PolyhedronTerm, ...]
    atom_names: Tuple[str, ...]
    very_essentially: bool
    requires_smooth_embedding: bool

    @property
    def essentially(self) -> bool:
        return bool(self.holes)

    @property
    def label(self) -> str:
        prefix = ""
        if self.very_essentially:
            prefix = "very essentially "
        elif self.essentially:
            prefix = "essentially "
        return f"{prefix}{self.mode.value}-({self.host}, {{{','.join(self.atom_names)}}})"

    def __str__(self) -> str:
        lines = [self.label]
        if self.holes:
            lines.append("holes: " + ", ".join(str(h) for h in self.holes))
        if self.requires_smooth_embedding:
            lines.append("host is a manifold type; its embedding is taken smooth")
        return "\n".join(lines)


def _is_sphere_like(term: PolyhedronTerm) -> bool:
    if isinstance(term, Atom):
        return term.atom.homotopy_sphere
    if isinstance(term, Bouquet):
        return all(isinstance(p, Atom) and p.atom.homotopy_sphere for p in term.parts)
    return False


def classify_sie_see(
    term: PolyhedronTerm,
    mode: Union[str, EmbeddingMode],
    holes: Optional[Sequence[PolyhedronTerm]] = None,
    atom_set: Optional[Iterable[str]] = None,
) -> Classification:
    """
    Label an immersed or embedded thickening of ``term``.

    With holes the configuration is "essentially" SIE/SEE; it is "very
    essentially" so when every hole is a point or a bouquet of spheres.
    ``atom_set`` defaults to every atom the host and the holes use; holes
    built from atoms outside an explicit set are rejected.
    """
    mode = EmbeddingMode(mode)
    holes = tuple(holes or ())
    used = {a.name for a in atom_types(term)}
    for hole in holes:
        used |= {a.name for a in atom_types(hole)}
    allowed: Set[str] = set(atom_set) if atom_set is not None else used
    for hole in holes:
        outside = {a.name for a in atom_types(hole)} - allowed
        if outside:
            raise ValueError(
                f"Hole {hole} uses atoms {sorted(outside)} outside the generating set {sorted(allowed)}"
            )
    outside = {a.name for a in atom_types(term)} - allowed
    if outside:
        raise ValueError(f"Host {term} uses atoms {sorted(outside)} outside the generating set")
    return Classification(
        mode=mode,
        host=term,
        holes=holes,
        atom_names=tuple(sorted(allowed)),
        very_essentially=bool(holes) and all(_is_sphere_like(h) for h in holes),
        requires_smooth_embedding=term.bit == 1,
    )


def _normal_form_piece(piece: PolyhedronTerm) -> Optional[str]:
    """None when the piece has an allowed shape, else the reason it does not."""
    if isinstance(piece, Atom):
        return None
    if isinstance(piece, ConnSum):
        if all(isinstance(p, Atom) for p in piece.parts):
            return None
        return "connected sum of non-atoms"
    if isinstance(piece, Product):
        for sphere, other in ((piece.left, piece.right), (piece.right, piece.left)):
            if isinstance(sphere, Atom) and sphere.atom.homotopy_sphere and _is_sphere_like(other):
                return None
        return "product factor not a homotopy sphere or a bouquet of them"
    return f"unexpected node {piece}"


def classify_thm2_normal_form(term: PolyhedronTerm, n: int, k: int) -> Verdict:
    """
    Normal form for (k-1)-connected elementary polyhedra in dimension n <= 3k.

    Accepted terms are bouquets of pieces, each a product of a homotopy
    sphere with a bouquet of homotopy spheres, or a connected sum of atoms.
    """
    if k < 2 or n < k:
        raise ValueError(f"Need k >= 2 and n >= k, got n={n}, k={k}")
    check = "normal form"
    if n > 3 * k:
        return Verdict(check, VerdictStatus.NO_CONSTRAINT, f"n = {n} > 3k = {3 * k}")
    for atom in atom_types(term):
        if not atom.simply_connected or atom.connectivity < k - 1:
            return Verdict(
                check,
                VerdictStatus.FAIL,
                f"root atom {atom.name} is not {k - 1}-connected",
                atom.name,
            )
    pieces = term.parts if isinstance(term, Bouquet) else (term,)
    for piece in pieces:
        reason = _normal_form_piece(piece)
        if reason is not None:
            return Verdict(check, VerdictStatus.FAIL, reason, piece)
    logger.debug(f"Normal form accepted for {term} at n={n}, k={k}")
    return Verdict(check, VerdictStatus.PASS, f"{len(pieces)} bouquet piece(s)")


def is_connected_sum_of_s2xs2(atom: AtomType) -> bool:
    """Closed simply-connected spin 4-manifold with signature 0: a #(S^2 x S^2)."""
    h = atom.homology
    return (
        atom.dim == 4
        and atom.is_manifold
        and atom.simply_connected
        and atom.orientable
        and atom.spin is True
        and atom.signature == 0
        and h.is_free
        and h.rank(1) == 0
        and h.rank(3) == 0
        and h.rank(2) >= 2
        and h.rank(2) % 2 == 0
    )


def _whitelisted(atom: AtomType, n: int, mode: EmbeddingMode) -> Optional[str]:
    if is_connected_sum_of_s2xs2(atom):
        return None
    simply_connected_manifold = atom.is_manifold and atom.simply_connected
    if n == 6 and atom.dim == 5 and simply_connected_manifold and atom.spin is True:
        return None
    if n == 6 and mode is EmbeddingMode.SIE and atom.dim == 4:
        if simply_connected_manifold and atom.signature == 0:
            return None
        return "dimension-4 atom must be simply connected with signature 0"
    if n == 6 and atom.dim == 5:
        return "dimension-5 atom must be simply connected and spin"
    if n == 5:
        return "only connected sums of copies of S2xS2 are allowed"
    return "atom is not a connected sum of copies of S2xS2"


@allowed_vals(mode=["SIE", "SEE"])
def validate_root_thm4_thm5(
    atoms: Sequence[AtomType], n: int, k: int, mode: Union[str, EmbeddingMode]
) -> Verdict:
    """Atom whitelist for (n, k) = (5, 2) and (6, 2)."""
    if (n, k) not in ((5, 2), (6, 2)):
        raise ValueError(f"Whitelist is known for (n, k) in {{(5, 2), (6, 2)}}, got ({n}, {k})")
    mode = EmbeddingMode(mode)
    check = f"root whitelist ({n},{k}) {mode.value}"
    accepted: List[str] = []
    for atom in atoms:
        if atom.homotopy_sphere:
            continue
        reason = _whitelisted(atom, n, mode)
        if reason is not None:
            return Verdict(check, VerdictStatus.FAIL, f"{atom.name}: {reason}", atom.name)
        accepted.append(atom.name)
    return Verdict(check, VerdictStatus.PASS, f"accepted {accepted or 'only homotopy spheres'}")


def check_thm3_holes(n: int, k: int, holes: HoleSpec) -> Verdict:
    """Holes of a (k-1)-connected very essential disc are spheres of dimension <= n-k-1."""
    for h, s in holes.spheres:
        if s > n - k - 1:
            return Verdict(
                "hole dimensions",
                VerdictStatus.FAIL,
                f"hole {h} carries S{s}, above n-k-1 = {n - k - 1}",
                (h, s),
            )
    return Verdict("hole dimensions", VerdictStatus.PASS, f"all spheres of dimension <= {n - k - 1}")
