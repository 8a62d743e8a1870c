"""Generated corpora of terms and hole specifications, swept against the chain oracle."""

import dataclasses
import itertools
import logging
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from tqdm.auto import tqdm

from sgm_workbench.atoms import AtomType, builtin_atoms, sphere_atom
from sgm_workbench.chain_oracle import oracle_homology_of_term, split_mayer_vietoris_homology
from sgm_workbench.graded_algebra import Coefficients, GradedModule
from sgm_workbench.invariants import HoleSpec, disc_with_holes_homology, homology_of_term
from sgm_workbench.terms import (
    Atom,
    Bouquet,
    CombinationKind,
    ConnSum,
    PolyhedronTerm,
    Product,
    root_combine,
    root_finish,
    root_new,
)
from sgm_workbench.workbench_utils import TermError, get_settings

logger = logging.getLogger("sgm_workbench")

SWEEP_COEFFICIENTS = (
    Coefficients.integers(),
    Coefficients.rationals(),
    Coefficients.mod(2),
    Coefficients.mod(3),
)


def corpus_atoms() -> List[AtomType]:
    """Sphere atoms of the configured dimensions plus S2xS2."""
    spheres = [sphere_atom(d) for d in get_settings().corpus_sphere_dims]
    return spheres + [builtin_atoms()["S2xS2"]]


def _combinations(a: PolyhedronTerm, b: PolyhedronTerm) -> Iterable[PolyhedronTerm]:
    builders = (
        lambda: Bouquet((a, b)),
        lambda: Product(a, b),
        lambda: Product(b, a),
        lambda: ConnSum((a, b)),
    )
    for build in builders:
        try:
            yield build()
        except TermError:
            continue


def enumerate_terms(
    max_atoms: Optional[int] = None, atoms: Optional[Sequence[AtomType]] = None
) -> List[PolyhedronTerm]:
    """Every canonical term with at most ``max_atoms`` atom leaves, deduplicated."""
    max_atoms = get_settings().corpus_max_atoms if max_atoms is None else max_atoms
    atoms = corpus_atoms() if atoms is None else list(atoms)
    if max_atoms < 1:
        raise ValueError(f"max_atoms must be positive, got {max_atoms}")
    by_size: Dict[int, Dict[str, PolyhedronTerm]] = {1: {str(Atom(a)): Atom(a) for a in atoms}}
    for size in range(2, max_atoms + 1):
        found: Dict[str, PolyhedronTerm] = {}
        for left in range(1, size // 2 + 1):
            pairs = itertools.product(by_size[left].values(), by_size[size - left].values())
            for a, b in pairs:
                for term in _combinations(a, b):
                    found.setdefault(str(term), term)
        by_size[size] = found
        logger.debug(f"{len(found)} terms with {size} atoms")
    seen: Dict[str, PolyhedronTerm] = {}
    for size in sorted(by_size):
        for key, term in by_size[size].items():
            seen.setdefault(key, term)
    return list(seen.values())


def sample_terms(
    count: int,
    max_atoms: Optional[int] = None,
    atoms: Optional[Sequence[AtomType]] = None,
    seed: int = 0,
    min_atoms: int = 1,
) -> List[PolyhedronTerm]:
    """Random finished root sequences; a rejected combination falls back to a bouquet."""
    max_atoms = get_settings().corpus_max_atoms if max_atoms is None else max_atoms
    if not 1 <= min_atoms <= max_atoms:
        raise ValueError(f"Need 1 <= min_atoms <= max_atoms, got {min_atoms} and {max_atoms}")
    atoms = corpus_atoms() if atoms is None else list(atoms)
    rng = np.random.default_rng(seed)
    kinds = list(CombinationKind)
    terms = []
    for _ in range(count):
        size = int(rng.integers(min_atoms, max_atoms + 1))
        r = root_new([atoms[int(i)] for i in rng.integers(0, len(atoms), size)])
        while len(r) > 1:
            k1, k2 = sorted(int(i) for i in rng.choice(len(r), 2, replace=False))
            try:
                r = root_combine(r, k1, k2, kinds[int(rng.integers(0, len(kinds)))])
            except TermError:
                r = root_combine(r, k1, k2, CombinationKind.BOUQUET)
        terms.append(root_finish(r)[0])
    return terms


def hole_specs(max_holes: int, max_summands: int, n: int) -> List[HoleSpec]:
    """Unlinked hole specifications in D^n, holes up to reordering."""
    dims = list(range(1, n - 1))
    shapes: List[Tuple[int, ...]] = [
        shape
        for count in range(max_summands + 1)
        for shape in itertools.combinations_with_replacement(dims, count)
    ]
    specs = []
    for count in range(max_holes + 1):
        for holes in itertools.combinations_with_replacement(shapes, count):
            specs.append(HoleSpec(tuple(holes)))
    return specs


@dataclasses.dataclass(frozen=True)
class Mismatch:
    subject: str
    coefficients: Coefficients
    formula: GradedModule
    oracle: GradedModule

    def to_json(self) -> Dict[str, Any]:
        return {
            "subject": self.subject,
            "coefficients": str(self.coefficients),
            "formula": self.formula.to_json(),
            "oracle": self.oracle.to_json(),
        }

    def __str__(self) -> str:
        return f"{self.subject} over {self.coefficients}: formula {self.formula}, oracle {self.oracle}"


def _progress(items: Sequence[Any], desc: str) -> Iterable[Any]:
    return tqdm(items, desc=desc, disable=not get_settings().show_progress)


def sweep_terms(
    terms: Sequence[PolyhedronTerm],
    coefficients: Sequence[Coefficients] = SWEEP_COEFFICIENTS,
) -> List[Mismatch]:
    mismatches = []
    for term in _progress(terms, "Sweeping terms"):
        for c in coefficients:
            formula = homology_of_term(term, c)
            oracle = oracle_homology_of_term(term, c)
            if formula != oracle:
                logger.warning(f"Formula and oracle disagree on {term} over {c}")
                mismatches.append(Mismatch(str(term), c, formula, oracle))
    return mismatches


def sweep_holes(
    n: int,
    specs: Sequence[HoleSpec],
    coefficients: Sequence[Coefficients] = SWEEP_COEFFICIENTS,
) -> List[Mismatch]:
    mismatches = []
    for spec in _progress(specs, f"Sweeping holes in D{n}"):
        for c in coefficients:
            formula = disc_with_holes_homology(n, 1, spec, c)
            oracle = split_mayer_vietoris_homology(n, spec, c)
            if formula != oracle:
                logger.warning(f"Formula and oracle disagree on {spec} in D{n} over {c}")
                mismatches.append(Mismatch(f"D{n} minus {spec}", c, formula, oracle))
    return mismatches
