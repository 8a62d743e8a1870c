"""
Elementary polyhedron terms and the root-sequence construction.

A term is an expression tree over atoms with bouquet, product and
connected-sum nodes. Each node carries the manifold/polyhedron bit:
atoms carry their own, bouquets and products carry 0, connected sums 1.
Bouquet and connected-sum nodes are n-ary, flattened and sorted by their
printed form, so structural equality is canonical equality.
"""

import abc
from collections import Counter
import dataclasses
from enum import Enum
import logging
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from sgm_workbench.atoms import AtomType
from sgm_workbench.workbench_utils import TermError, Verdict, VerdictStatus, check_degree

logger = logging.getLogger("sgm_workbench")

BOUQUET_CLAUSE = "(2d1)"
PRODUCT_CLAUSE = "(2d2)"
CONNSUM_CLAUSE = "(2d3)"


class PolyhedronTerm(abc.ABC):
    @property
    @abc.abstractmethod
    def bit(self) -> int:
        """1 for a manifold type, 0 for a polyhedron."""

    @property
    @abc.abstractmethod
    def dim(self) -> int:
        pass

    @property
    @abc.abstractmethod
    def children(self) -> Tuple["PolyhedronTerm", ...]:
        pass

    @property
    def orientable(self) -> bool:
        return False

    def __lt__(self, other: "PolyhedronTerm") -> bool:
        return str(self) < str(other)


@dataclasses.dataclass(frozen=True, eq=True)
class Atom(PolyhedronTerm):
    atom: AtomType

    @property
    def bit(self) -> int:
        return int(self.atom.is_manifold)

    @property
    def dim(self) -> int:
        return self.atom.dim

    @property
    def children(self) -> Tuple[PolyhedronTerm, ...]:
        return ()

    @property
    def orientable(self) -> bool:
        return self.atom.is_manifold and self.atom.orientable

    def __str__(self) -> str:
        if self.atom.is_sphere_atom:
            return self.atom.name
        return f"@{self.atom.name}"


def _flatten(parts: Sequence[PolyhedronTerm], node: type) -> Tuple[PolyhedronTerm, ...]:
    flat: List[PolyhedronTerm] = []
    for part in parts:
        if isinstance(part, node):
            flat.extend(part.children)
        else:
            flat.append(part)
    return tuple(sorted(flat, key=str))


@dataclasses.dataclass(frozen=True, eq=True)
class Bouquet(PolyhedronTerm):
    parts: Tuple[PolyhedronTerm, ...]

    def __post_init__(self) -> None:
        parts = _flatten(self.parts, Bouquet)
        if len(parts) < 2:
            raise TermError("a bouquet needs at least two parts", BOUQUET_CLAUSE)
        object.__setattr__(self, "parts", parts)

    @property
    def bit(self) -> int:
        return 0

    @property
    def dim(self) -> int:
        return max(part.dim for part in self.parts)

    @property
    def children(self) -> Tuple[PolyhedronTerm, ...]:
        return self.parts

    def __str__(self) -> str:
        return "B(" + ",".join(str(p) for p in self.parts) + ")"


@dataclasses.dataclass(frozen=True, eq=True)
class Product(PolyhedronTerm):
    left: PolyhedronTerm
    right: PolyhedronTerm

    def __post_init__(self) -> None:
        if self.left.bit == 0 and self.right.bit == 0:
            raise TermError(
                f"product of two polyhedra {self.left} and {self.right}; one factor must be a manifold",
                PRODUCT_CLAUSE,
            )
        check_degree(self.left.dim + self.right.dim, "Product dimension")

    @property
    def bit(self) -> int:
        return 0

    @property
    def dim(self) -> int:
        return self.left.dim + self.right.dim

    @property
    def children(self) -> Tuple[PolyhedronTerm, ...]:
        return (self.left, self.right)

    def __str__(self) -> str:
        return f"P({self.left},{self.right})"


@dataclasses.dataclass(frozen=True, eq=True)
class ConnSum(PolyhedronTerm):
    parts: Tuple[PolyhedronTerm, ...]

    def __post_init__(self) -> None:
        parts = _flatten(self.parts, ConnSum)
        if len(parts) < 2:
            raise TermError("a connected sum needs at least two summands", CONNSUM_CLAUSE)
        for part in parts:
            if part.bit != 1:
                raise TermError(
                    f"connected sum over the polyhedron {part}; summands must be manifolds",
                    CONNSUM_CLAUSE,
                )
            if not part.orientable:
                raise TermError(
                    f"connected sum over the non-orientable {part}", CONNSUM_CLAUSE
                )
        dims = {part.dim for part in parts}
        if len(dims) != 1:
            raise TermError(
                f"connected sum of manifolds of dimensions {sorted(dims)}", CONNSUM_CLAUSE
            )
        if dims == {0}:
            raise TermError("connected sum of points", CONNSUM_CLAUSE)
        object.__setattr__(self, "parts", parts)

    @property
    def bit(self) -> int:
        return 1

    @property
    def dim(self) -> int:
        return self.parts[0].dim

    @property
    def children(self) -> Tuple[PolyhedronTerm, ...]:
        return self.parts

    @property
    def orientable(self) -> bool:
        return True

    def __str__(self) -> str:
        return "CS[" + ",".join(str(p) for p in self.parts) + "]"


def bouquet(*parts: PolyhedronTerm) -> Bouquet:
    return Bouquet(tuple(parts))


def conn_sum(*parts: PolyhedronTerm) -> ConnSum:
    return ConnSum(tuple(parts))


def print_term(term: PolyhedronTerm) -> str:
    return str(term)


def iter_nodes(term: PolyhedronTerm) -> Iterator[PolyhedronTerm]:
    """Pre-order walk."""
    yield term
    for child in term.children:
        yield from iter_nodes(child)


def atom_types(term: PolyhedronTerm) -> List[AtomType]:
    return [node.atom for node in iter_nodes(term) if isinstance(node, Atom)]


def atoms_multiset(term: PolyhedronTerm) -> Counter:
    return Counter(atom.name for atom in atom_types(term))


def expected_bit(term: PolyhedronTerm) -> int:
    if isinstance(term, Atom):
        return int(term.atom.is_manifold)
    if isinstance(term, ConnSum):
        return 1
    return 0


def check_bits(term: PolyhedronTerm) -> Verdict:
    """Scan every node against the bit table."""
    for node in iter_nodes(term):
        if node.bit != expected_bit(node):
            return Verdict(
                "bit propagation",
                VerdictStatus.FAIL,
                f"node carries bit {node.bit}, expected {expected_bit(node)}",
                node,
            )
    return Verdict("bit propagation", VerdictStatus.PASS)


def normalize_term(term: PolyhedronTerm) -> PolyhedronTerm:
    """Drop standard-sphere summands from connected sums, bottom-up."""
    if isinstance(term, Atom):
        return term
    if isinstance(term, Product):
        return Product(normalize_term(term.left), normalize_term(term.right))
    parts = [normalize_term(p) for p in term.children]
    if isinstance(term, Bouquet):
        return Bouquet(tuple(parts))
    kept = [
        p for p in parts if not (isinstance(p, Atom) and p.atom.standard_sphere)
    ]
    if not kept:
        return parts[0]
    if len(kept) == 1:
        return kept[0]
    return ConnSum(tuple(kept))


class CombinationKind(Enum):
    BOUQUET = "bouquet"
    PRODUCT = "product"
    CONNSUM = "connsum"


class TraceKind(Enum):
    BOUQUET_SUMMAND = "bouquet-summand"
    PRODUCT_FACTOR = "product-factor"


@dataclasses.dataclass(frozen=True)
class TraceEmbedding:
    kind: TraceKind
    source: PolyhedronTerm
    target: PolyhedronTerm
    special: bool

    def __str__(self) -> str:
        marker = " (special)" if self.special else ""
        return f"{self.kind.value}: {self.source} -> {self.target}{marker}"


@dataclasses.dataclass(frozen=True)
class CombinationRecord:
    k1: int
    k2: int
    kind: CombinationKind


TraceRecord = Tuple[TraceEmbedding, ...]


@dataclasses.dataclass(frozen=True)
class RootSequence:
    entries: Tuple[Tuple[PolyhedronTerm, int], ...]
    root: Tuple[AtomType, ...]
    history: Tuple[CombinationRecord, ...] = ()
    traces: TraceRecord = ()

    def __len__(self) -> int:
        return len(self.entries)

    def root_multiset(self) -> Counter:
        return Counter(atom.name for atom in self.root)


def root_new(atoms: Sequence[AtomType]) -> RootSequence:
    if not atoms:
        raise TermError("a root sequence needs at least one atom")
    for atom in atoms:
        if not atom.is_manifold:
            raise TermError(f"root atom {atom.name} is not a closed manifold")
    return RootSequence(
        entries=tuple((Atom(atom), 1) for atom in atoms), root=tuple(atoms)
    )


def root_combine(
    r: RootSequence, k1: int, k2: int, kind: Union[str, CombinationKind]
) -> RootSequence:
    """
    Combine entries k1 < k2 (0-based): both are removed and the combined
    term is appended at the end.
    """
    kind = CombinationKind(kind)
    if not 0 <= k1 < k2 < len(r.entries):
        raise TermError(
            f"indices ({k1}, {k2}) must satisfy 0 <= k1 < k2 < {len(r.entries)}"
        )
    (t1, b1), (t2, b2) = r.entries[k1], r.entries[k2]
    traces: List[TraceEmbedding] = []
    trace_kind: Optional[TraceKind] = None
    combined: PolyhedronTerm
    if kind is CombinationKind.BOUQUET:
        combined = Bouquet((t1, t2))
        trace_kind = TraceKind.BOUQUET_SUMMAND
    elif kind is CombinationKind.PRODUCT:
        if (b1, b2) == (0, 0):
            raise TermError(f"product of entries {k1} and {k2} with bits (0,0)", PRODUCT_CLAUSE)
        combined = Product(t1, t2)
        trace_kind = TraceKind.PRODUCT_FACTOR
    else:
        if (b1, b2) != (1, 1):
            raise TermError(
                f"connected sum of entries {k1} and {k2} with bits ({b1},{b2})", CONNSUM_CLAUSE
            )
        combined = ConnSum((t1, t2))
    if trace_kind is not None:
        traces = [
            TraceEmbedding(trace_kind, t1, combined, b1 == 1),
            TraceEmbedding(trace_kind, t2, combined, b2 == 1),
        ]
    entries = [e for i, e in enumerate(r.entries) if i not in (k1, k2)]
    entries.append((combined, combined.bit))
    logger.debug(f"Combined entries {k1}, {k2} by {kind.value}: {combined}")
    return RootSequence(
        entries=tuple(entries),
        root=r.root,
        history=r.history + (CombinationRecord(k1, k2, kind),),
        traces=r.traces + tuple(traces),
    )


def root_finish(r: RootSequence) -> Tuple[PolyhedronTerm, TraceRecord]:
    if len(r.entries) != 1:
        raise TermError(
            f"root sequence still has {len(r.entries)} entries; combine down to one first"
        )
    return r.entries[0][0], r.traces
