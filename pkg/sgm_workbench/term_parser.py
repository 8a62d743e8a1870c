"""
Surface syntax for polyhedron terms.

    term    :: sphere | named | bouquet | product | connsum
    sphere  :: 'S' digits
    named   :: '@' name
    bouquet :: 'B(' term (',' term)* ')'
    product :: 'P(' term ',' term ')'
    connsum :: 'CS[' term (',' term)* ']'

Whitespace between tokens is ignored. Parsing first builds nested lists
tagged by node kind; terms are constructed afterwards so clause violations
surface as TermError with the clause named.
"""

import logging
from typing import Any, List, Optional

from pyparsing import (
    Forward,
    Group,
    Literal,
    ParseBaseException,
    ParserElement,
    Suppress,
    Word,
    ZeroOrMore,
    alphanums,
    nums,
)

from sgm_workbench.atoms import AtomTable, builtin_atoms, sphere_atom
from sgm_workbench.terms import Atom, Bouquet, ConnSum, PolyhedronTerm, Product, print_term
from sgm_workbench.workbench_utils import TermError

logger = logging.getLogger("sgm_workbench")

ATOM_NAME_CHARS = alphanums + "_#~+.-"


class TermSyntaxError(TermError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"syntax error at position {position}: {message}")
        self.position = position


def _tagged(tag: str) -> Any:
    def action(tokens: Any) -> Any:
        return [[tag] + list(tokens[0])]

    return action


def _build_grammar() -> ParserElement:
    term = Forward()
    comma = Suppress(",")
    sphere = Group(Suppress("S") + Word(nums)).set_parse_action(_tagged("S"))
    named = Group(Suppress("@") + Word(ATOM_NAME_CHARS)).set_parse_action(_tagged("@"))
    bouquet = Group(
        Suppress(Literal("B")) + Suppress("(") + term + ZeroOrMore(comma + term) + Suppress(")")
    ).set_parse_action(_tagged("B"))
    product = Group(
        Suppress(Literal("P")) + Suppress("(") + term + comma + term + Suppress(")")
    ).set_parse_action(_tagged("P"))
    connsum = Group(
        Suppress(Literal("CS")) + Suppress("[") + term + ZeroOrMore(comma + term) + Suppress("]")
    ).set_parse_action(_tagged("CS"))
    term <<= connsum | bouquet | product | sphere | named
    return term


_GRAMMAR = _build_grammar()


def parse_tree(text: str) -> List[Any]:
    """Nested ``[tag, child, ...]`` lists, before any term is built."""
    try:
        result = _GRAMMAR.parse_string(text, parse_all=True)
    except ParseBaseException as e:
        raise TermSyntaxError(e.msg, e.loc) from None
    return result.as_list()[0]


def _build(tree: List[Any], atoms: AtomTable) -> PolyhedronTerm:
    tag, children = tree[0], tree[1:]
    if tag == "S":
        name = f"S{int(children[0])}"
        atom = atoms.get(name)
        return Atom(atom if atom is not None else sphere_atom(int(children[0])))
    if tag == "@":
        if children[0] not in atoms:
            raise TermError(f"unknown atom '@{children[0]}'")
        return Atom(atoms[children[0]])
    parts = [_build(child, atoms) for child in children]
    if tag == "B":
        return Bouquet(tuple(parts))
    if tag == "P":
        return Product(parts[0], parts[1])
    return ConnSum(tuple(parts))


def parse_term(text: str, atoms: Optional[AtomTable] = None) -> PolyhedronTerm:
    """
    Parse a term expression into its canonical term.

    Parameters:
        text: expression such as ``B(S2,CS[@S2xS2,@S2xS2])``
        atoms: atom table for ``@name`` lookups (default: built-ins)

    Returns:
        the canonical PolyhedronTerm
    """
    tree = parse_tree(text)
    term = _build(tree, builtin_atoms() if atoms is None else atoms)
    logger.debug(f"Parsed '{text}' as {print_term(term)}")
    return term
