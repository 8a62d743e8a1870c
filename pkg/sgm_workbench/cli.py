"""
Main command-line entry point.

Exit codes: 0 when every check passes, 1 when a check fails (the report
carries the witness), 2 on input errors.
"""

import argparse
import json
import logging
from pathlib import Path
import sys
from typing import Any, Callable, Dict, Optional, Sequence

from sgm_workbench.atoms import AtomTable, builtin_atoms, load_atom_table
from sgm_workbench.chain_oracle import (
    oracle_homology_of_term,
    rp2_6,
    simplicial_cup_product,
    torus7,
)
from sgm_workbench.classify import (
    EmbeddingMode,
    check_thm3_holes,
    classify_thm2_normal_form,
    validate_root_thm4_thm5,
)
from sgm_workbench.corpus import (
    enumerate_terms,
    hole_specs,
    sample_terms,
    sweep_holes,
    sweep_terms,
)
from sgm_workbench.dga import FiniteDGA, borromean_fixture, exterior_dga, triple_massey
from sgm_workbench.graded_algebra import Coefficients
from sgm_workbench.invariants import (
    HoleSpec,
    connectivity_of_term,
    disc_with_holes_homology,
    homology_of_term,
    massey_vanish_by_degree,
    realize_ranks,
)
from sgm_workbench.reports import Report, format_homology
from sgm_workbench.rings import (
    CohomologyRing,
    check_ring_invariants,
    check_thm1_vanishing,
    exterior_ring,
    ring_from_holes,
    sphere_ring,
)
from sgm_workbench.sgm import (
    SgmImage,
    check_poincare_duality,
    main_thm1_pipeline,
    source_homology,
    source_homology_mayer_vietoris,
)
from sgm_workbench.term_parser import parse_term
from sgm_workbench.terms import atom_types, atoms_multiset, check_bits, print_term
from sgm_workbench.workbench_utils import (
    INDEX_MODES,
    Verdict,
    VerdictStatus,
    configure,
)

logger = logging.getLogger("sgm_workbench")


def load_json(value: str) -> Any:
    """A JSON document given inline or as a path to a file."""
    if value.lstrip()[:1] in ("{", "["):
        return json.loads(value)
    with open(Path(value), "r", encoding="utf-8") as f:
        return json.load(f)


def parse_rank_vector(text: str) -> Dict[int, int]:
    """``"2:1,5:3"`` or a JSON object ``{"2": 1, "5": 3}``."""
    text = text.strip()
    if text.startswith("{"):
        return {int(k): int(v) for k, v in json.loads(text).items()}
    ranks: Dict[int, int] = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        try:
            degree, rank = item.split(":")
            ranks[int(degree)] = int(rank)
        except ValueError:
            raise ValueError(f"Bad rank entry '{item}', expected <degree>:<rank>") from None
    return ranks


def load_ring(spec: str, coefficients: Coefficients) -> CohomologyRing:
    """
    A ring file, or one of the built-ins ``torus7`` (exterior algebra on 7
    generators), ``exterior:<g>``, ``sphere:<d>``, ``simplicial:torus`` and
    ``simplicial:rp2``.
    """
    if spec == "torus7":
        return exterior_ring(7, coefficients)
    if spec.startswith("exterior:"):
        return exterior_ring(int(spec.split(":", 1)[1]), coefficients)
    if spec.startswith("sphere:"):
        return sphere_ring(int(spec.split(":", 1)[1]), coefficients)
    if spec == "simplicial:torus":
        return simplicial_cup_product(torus7(), coefficients)
    if spec == "simplicial:rp2":
        return simplicial_cup_product(rp2_6(), coefficients)
    return CohomologyRing.from_json(load_json(spec))


def load_dga(spec: str) -> FiniteDGA:
    if spec == "borromean":
        return borromean_fixture()
    if spec.startswith("exterior:"):
        return exterior_dga(int(spec.split(":", 1)[1]))
    return FiniteDGA.from_json(load_json(spec))


def _atoms(args: argparse.Namespace) -> AtomTable:
    return load_atom_table(args.atoms) if args.atoms else builtin_atoms()


def _coefficients(args: argparse.Namespace) -> Coefficients:
    return Coefficients.parse(args.coeff)


def run_eval(args: argparse.Namespace) -> Report:
    term = parse_term(args.term, _atoms(args))
    coefficients = _coefficients(args)
    h = homology_of_term(term, coefficients)
    report = Report(f"Term {print_term(term)}")
    report.add("Term", print_term(term), "term", print_term(term))
    report.payload["bit"] = term.bit
    report.payload["dim"] = term.dim
    report.add("Homology", format_homology(h), "homology", h.to_json())
    connectivity = connectivity_of_term(term)
    report.add("Connectivity", str(connectivity), "connectivity", connectivity)
    atoms = dict(sorted(atoms_multiset(term).items()))
    report.add("Atoms", ", ".join(f"{k} x{v}" for k, v in atoms.items()), "atoms", atoms)
    report.add_verdict(check_bits(term))
    if args.oracle:
        oracle = oracle_homology_of_term(term, coefficients)
        status = VerdictStatus.PASS if oracle == h else VerdictStatus.FAIL
        report.add_verdict(Verdict("formula vs chain oracle", status, f"oracle: {oracle}"))
    return report


def run_ring(args: argparse.Namespace) -> Report:
    ring = load_ring(args.ring, _coefficients(args))
    report = Report(f"Ring {args.ring}")
    report.add("Multiplication table", str(ring), "ring", ring.to_json())
    report.add_verdict(check_ring_invariants(ring))
    return report


def run_holes(args: argparse.Namespace) -> Report:
    holes = HoleSpec.from_json(load_json(args.holes))
    coefficients = _coefficients(args)
    h = disc_with_holes_homology(args.n, args.k, holes, coefficients)
    report = Report(f"D{args.n} minus {holes}")
    report.add("Holes", str(holes), "holes", holes.to_json())
    report.add("Homology", format_homology(h), "homology", h.to_json())
    report.add_verdict(check_thm3_holes(args.n, args.k, holes))
    ranks = {j: r for j, r in h.ranks().items() if j > 0}
    report.add_verdict(massey_vanish_by_degree(args.n, args.k, ranks))
    if args.with_ring:
        ring = ring_from_holes(args.n, args.k, holes, coefficients, args.index_mode)
        report.add("Cohomology ring", str(ring), "ring", ring.to_json())
        report.add_verdict(check_ring_invariants(ring))
    return report


def run_realize(args: argparse.Namespace) -> Report:
    ranks = parse_rank_vector(args.ranks)
    holes = realize_ranks(args.n, args.k, ranks)
    report = Report(f"Holes realizing ranks {ranks} in D{args.n}")
    report.add("Holes", str(holes), "holes", holes.to_json())
    h = disc_with_holes_homology(args.n, args.k, holes, Coefficients.integers())
    report.add("Homology", format_homology(h), "homology", h.to_json())
    return report


def run_massey(args: argparse.Namespace) -> Report:
    dga = load_dga(args.dga)
    result = triple_massey(dga, args.u, args.v, args.w, convention=args.convention)
    report = Report(f"Massey product <{args.u}, {args.v}, {args.w}>")
    report.add("Result", str(result), "massey", result.to_json())
    return report


def run_sgm(args: argparse.Namespace) -> Report:
    img = SgmImage.from_json(load_json(args.image))
    coefficients = _coefficients(args)
    h = source_homology(img, args.m, coefficients)
    report = Report(f"Source of {img} -> R^{img.n}, m = {args.m}")
    report.add("Image", str(img), "image", img.to_json())
    report.add("Source homology", format_homology(h), "homology", h.to_json())
    report.add_verdict(check_poincare_duality(h, args.m))
    if args.mayer_vietoris:
        other = source_homology_mayer_vietoris(img, args.m, coefficients)
        status = VerdictStatus.PASS if other == h else VerdictStatus.FAIL
        report.add_verdict(Verdict("formula vs Mayer-Vietoris", status, f"Mayer-Vietoris: {other}"))
    return report


def run_check_root(args: argparse.Namespace) -> Report:
    term = parse_term(args.term, _atoms(args))
    report = Report(f"Root checks for {print_term(term)} at n={args.n}, k={args.k}")
    report.add("Term", print_term(term), "term", print_term(term))
    report.add_verdict(classify_thm2_normal_form(term, args.n, args.k))
    if (args.n, args.k) in ((5, 2), (6, 2)):
        root = list({a.name: a for a in atom_types(term)}.values())
        report.add_verdict(validate_root_thm4_thm5(root, args.n, args.k, args.mode))
    return report


def run_check_thm1(args: argparse.Namespace) -> Report:
    ring = load_ring(args.ring, _coefficients(args))
    report = Report(f"Vanishing check for {args.ring} at (m, n) = ({args.m}, {args.n})")
    report.add_verdict(check_thm1_vanishing(ring, args.m, args.n, args.max_factors))
    return report


def run_pipeline(args: argparse.Namespace) -> Report:
    return main_thm1_pipeline().to_report()


def run_oracle(args: argparse.Namespace) -> Report:
    if args.sample:
        terms = sample_terms(args.sample, args.max_atoms, seed=args.seed)
    else:
        terms = enumerate_terms(args.max_atoms)
    mismatches = sweep_terms(terms)
    for n in range(2, args.max_n + 1):
        mismatches += sweep_holes(n, hole_specs(args.max_holes, args.max_summands, n))
    report = Report("Formula vs chain oracle")
    report.add("Corpus", f"{len(terms)} terms, hole specs in D2..D{args.max_n}", "terms", len(terms))
    report.payload["mismatches"] = [m.to_json() for m in mismatches]
    if mismatches:
        report.add("Mismatches", "\n".join(str(m) for m in mismatches))
    report.add_verdict(
        Verdict(
            "formula vs chain oracle",
            VerdictStatus.FAIL if mismatches else VerdictStatus.PASS,
            f"{len(mismatches)} mismatches",
            mismatches[0] if mismatches else None,
        )
    )
    return report


HANDLERS: Dict[str, Callable[[argparse.Namespace], Report]] = {
    "eval": run_eval,
    "ring": run_ring,
    "holes": run_holes,
    "realize": run_realize,
    "massey": run_massey,
    "sgm": run_sgm,
    "check-root": run_check_root,
    "check-thm1": run_check_thm1,
    "pipeline": run_pipeline,
    "oracle": run_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--coeff", default="Z", help="coefficients: Z, Q or Zp:<p>")
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--index-mode", choices=INDEX_MODES, default=None)
    common.add_argument("--max-factors", type=int, default=None)
    common.add_argument("--atoms", default=None, help="JSON atom table merged over the built-ins")
    common.add_argument("-v", "--verbose", action="store_true")
    common.add_argument("--quiet", action="store_true", help="no progress bars")

    parser = argparse.ArgumentParser(
        prog="sgm_workbench",
        description="Elementary polyhedra, disc-with-holes invariants and special generic maps.",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    p = verbs.add_parser("eval", parents=[common], help="homology of a term")
    p.add_argument("term")
    p.add_argument("--oracle", action="store_true", help="cross-check with the chain oracle")

    p = verbs.add_parser("ring", parents=[common], help="print a ring and check its axioms")
    p.add_argument("--ring", required=True)

    p = verbs.add_parser("holes", parents=[common], help="invariants of a disc with holes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--holes", required=True, help='JSON, e.g. \'{"holes": [[3],[3],[3]]}\'')
    p.add_argument("--with-ring", action="store_true")

    p = verbs.add_parser("realize", parents=[common], help="holes realizing a rank vector")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--ranks", required=True, help='"<degree>:<rank>,..." or a JSON object')

    p = verbs.add_parser("massey", parents=[common], help="triple Massey product in a DGA")
    p.add_argument("--dga", default="borromean")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--convention", choices=["standard", "alternate"], default="standard")

    p = verbs.add_parser("sgm", parents=[common], help="homology of a special generic map source")
    p.add_argument("--image", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mayer-vietoris", action="store_true")

    p = verbs.add_parser("check-root", parents=[common], help="normal form and atom whitelists")
    p.add_argument("term")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in EmbeddingMode], default="SEE")

    p = verbs.add_parser("check-thm1", parents=[common], help="low-degree product vanishing")
    p.add_argument("--ring", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = verbs.add_parser("pipeline", parents=[common], help="run a named pipeline")
    p.add_argument("name", choices=["borromean"])

    p = verbs.add_parser("oracle", parents=[common], help="formula vs chain-oracle sweep")
    p.add_argument("--max-atoms", type=int, default=None)
    p.add_argument("--sample", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-holes", type=int, default=3)
    p.add_argument("--max-summands", type=int, default=3)
    p.add_argument("--max-n", type=int, default=7)
    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING)
    for handler in logging.root.handlers:
        handler.addFilter(logging.Filter("sgm_workbench"))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Execute one command and return its exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    try:
        overrides: Dict[str, Any] = {"show_progress": not args.quiet}
        if args.index_mode is not None:
            overrides["index_mode"] = args.index_mode
        if args.max_factors is not None:
            overrides["max_factors"] = args.max_factors
        settings = configure(**overrides)
        logger.debug(f"Running {args.verb} with {settings}")
        report = HANDLERS[args.verb](args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(report.render(as_json=args.json))
    return report.exit_code


# Main command-line entry point.
if __name__ == "__main__":
    sys.exit(main())
