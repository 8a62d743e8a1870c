"""
Finite differential graded algebras and triple Massey products.

A FiniteDGA is a finite graded basis of named cochains with a degree +1
differential and a product table; entries missing from either table are
zero. All cohomology and Massey computations are exact.
"""

import dataclasses
import itertools
import logging
from types import MappingProxyType
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from sgm_workbench.graded_algebra import Coefficients, FgModule, GradedModule, Scalar
from sgm_workbench.rings import format_scalar, parse_scalar
from sgm_workbench.smith import (
    LinearSolver,
    as_array,
    kernel_basis,
    matmul,
    reduce_vector,
    smith_decomposition,
    smith_diagonal,
)
from sgm_workbench.workbench_utils import (
    StructuralError,
    Verdict,
    VerdictStatus,
    allowed_vals,
    check_degree,
)

logger = logging.getLogger("sgm_workbench")

NameCombination = Dict[str, Scalar]

MASSEY_CONVENTIONS = ["standard", "alternate"]


@dataclasses.dataclass(frozen=True)
class BasisElement:
    name: str
    degree: int


@dataclasses.dataclass(frozen=True)
class Cochain:
    """A homogeneous cochain; the zero cochain still knows its degree."""

    degree: int
    terms: Mapping[str, Scalar]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "terms", MappingProxyType({k: v for k, v in self.terms.items() if v != 0})
        )

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for name in sorted(self.terms):
            c = self.terms[name]
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{c}*{name}")
        return " + ".join(parts).replace("+ -", "- ")


CochainLike = Union[str, Cochain, Mapping[str, Scalar]]


def _frozen_table(table: Mapping[Any, Mapping[str, Scalar]]) -> Mapping[Any, Mapping[str, Scalar]]:
    return MappingProxyType({k: MappingProxyType(dict(v)) for k, v in table.items()})


@dataclasses.dataclass(frozen=True)
class FiniteDGA:
    coefficients: Coefficients
    basis: Tuple[BasisElement, ...]
    differential: Mapping[str, Mapping[str, Scalar]]
    products: Mapping[Tuple[str, str], Mapping[str, Scalar]]
    unit: str = "1"
    allow_noncommutative: bool = False

    def __post_init__(self) -> None:
        degrees: Dict[str, int] = {}
        for element in self.basis:
            if element.name in degrees:
                raise ValueError(f"Duplicate basis name '{element.name}'")
            if element.degree < 0:
                raise ValueError(f"Basis element {element.name} has negative degree {element.degree}")
            check_degree(element.degree, f"Degree of {element.name}")
            degrees[element.name] = element.degree
        if degrees.get(self.unit) != 0:
            raise ValueError(f"Unit '{self.unit}' must be a degree-0 basis element")

        def clean(value: Mapping[str, Scalar], degree: int, what: str) -> NameCombination:
            out: NameCombination = {}
            for name, c in value.items():
                if name not in degrees:
                    raise ValueError(f"{what} uses unknown basis name '{name}'")
                if degrees[name] != degree:
                    raise ValueError(
                        f"{what} has term {name} of degree {degrees[name]}, expected {degree}"
                    )
                c = self.coefficients.reduce(c)
                if not self.coefficients.is_zero(c):
                    out[name] = c
            return out

        differential = {}
        for name, value in self.differential.items():
            if name not in degrees:
                raise ValueError(f"Differential given for unknown basis name '{name}'")
            cleaned = clean(value, degrees[name] + 1, f"d({name})")
            if cleaned:
                differential[name] = cleaned
        products = {}
        for (x, y), value in self.products.items():
            if x not in degrees or y not in degrees:
                raise ValueError(f"Product {x}*{y} uses an unknown basis name")
            cleaned = clean(value, degrees[x] + degrees[y], f"{x}*{y}")
            if cleaned:
                products[(x, y)] = cleaned
        object.__setattr__(self, "basis", tuple(self.basis))
        object.__setattr__(self, "differential", _frozen_table(differential))
        object.__setattr__(self, "products", _frozen_table(products))

    @property
    def top_degree(self) -> int:
        return max(e.degree for e in self.basis)

    def degree_of(self, name: str) -> int:
        for element in self.basis:
            if element.name == name:
                return element.degree
        raise ValueError(f"Unknown basis name '{name}'")

    def names(self, degree: int) -> List[str]:
        return [e.name for e in self.basis if e.degree == degree]

    def cochain(self, value: CochainLike, degree: Optional[int] = None) -> Cochain:
        """Accept a basis name, a combination of names or a Cochain."""
        if isinstance(value, Cochain):
            return value
        if isinstance(value, str):
            return Cochain(self.degree_of(value), {value: 1})
        terms = {k: self.coefficients.reduce(v) for k, v in value.items()}
        terms = {k: v for k, v in terms.items() if not self.coefficients.is_zero(v)}
        found = {self.degree_of(name) for name in terms}
        if len(found) > 1:
            raise ValueError(f"Cochain {dict(value)} mixes degrees {sorted(found)}")
        if found:
            (only,) = found
            if degree is not None and degree != only:
                raise ValueError(f"Cochain {dict(value)} has degree {only}, not {degree}")
            degree = only
        if degree is None:
            raise ValueError("The zero cochain needs an explicit degree")
        return Cochain(degree, terms)

    def vector(self, c: Cochain) -> np.ndarray:
        names = self.names(c.degree)
        out = np.zeros(len(names), dtype=object)
        for i, name in enumerate(names):
            out[i] = c.terms.get(name, 0)
        return out

    def from_vector(self, v: Sequence[Scalar], degree: int) -> Cochain:
        names = self.names(degree)
        terms = {}
        for name, c in zip(names, v):
            c = self.coefficients.reduce(c)
            if not self.coefficients.is_zero(c):
                terms[name] = c
        return Cochain(degree, terms)

    def coboundary(self, degree: int) -> np.ndarray:
        """Matrix of d from degree ``degree`` to ``degree + 1``."""
        source, target = self.names(degree), self.names(degree + 1)
        out = np.zeros((len(target), len(source)), dtype=object)
        row = {name: i for i, name in enumerate(target)}
        for j, name in enumerate(source):
            for z, c in self.differential.get(name, {}).items():
                out[row[z], j] = c
        return out

    def d(self, c: Cochain) -> Cochain:
        out: Dict[str, Scalar] = {}
        for name, coefficient in c.terms.items():
            for z, value in self.differential.get(name, {}).items():
                out[z] = out.get(z, 0) + coefficient * value
        return self.cochain(out, c.degree + 1)

    def multiply(self, a: Cochain, b: Cochain) -> Cochain:
        out: Dict[str, Scalar] = {}
        for x, cx in a.terms.items():
            for y, cy in b.terms.items():
                for z, cz in self.products.get((x, y), {}).items():
                    out[z] = out.get(z, 0) + cx * cy * cz
        return self.cochain(out, a.degree + b.degree)

    def add(self, *cochains: Cochain, signs: Optional[Sequence[int]] = None) -> Cochain:
        signs = signs or [1] * len(cochains)
        degree = cochains[0].degree
        out: Dict[str, Scalar] = {}
        for sign, c in zip(signs, cochains):
            if c.degree != degree:
                raise ValueError(f"Cannot add cochains of degrees {degree} and {c.degree}")
            for name, value in c.terms.items():
                out[name] = out.get(name, 0) + sign * value
        return self.cochain(out, degree)

    def to_json(self) -> Dict[str, Any]:
        return {
            "coefficients": str(self.coefficients),
            "unit": self.unit,
            "basis": [{"name": e.name, "degree": e.degree} for e in self.basis],
            "d": {
                name: {z: format_scalar(c) for z, c in value.items()}
                for name, value in self.differential.items()
            },
            "mul": [
                {"left": x, "right": y, "value": {z: format_scalar(c) for z, c in value.items()}}
                for (x, y), value in self.products.items()
            ],
            "allow_noncommutative": self.allow_noncommutative,
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "FiniteDGA":
        """Products with the unit may be left out; they are filled in."""
        basis = tuple(BasisElement(str(e["name"]), int(e["degree"])) for e in data["basis"])
        unit = str(data.get("unit", "1"))
        differential = {
            name: {z: parse_scalar(c) for z, c in value.items()}
            for name, value in data.get("d", {}).items()
        }
        products: Dict[Tuple[str, str], NameCombination] = {}
        for e in basis:
            products[(unit, e.name)] = {e.name: 1}
            products[(e.name, unit)] = {e.name: 1}
        for entry in data.get("mul", []):
            products[(entry["left"], entry["right"])] = {
                z: parse_scalar(c) for z, c in entry["value"].items()
            }
        return cls(
            Coefficients.parse(data.get("coefficients", "Z")),
            basis,
            differential,
            products,
            unit,
            bool(data.get("allow_noncommutative", False)),
        )


def _unit_products(names: Sequence[str], unit: str) -> Dict[Tuple[str, str], NameCombination]:
    table: Dict[Tuple[str, str], NameCombination] = {}
    for name in names:
        table[(unit, name)] = {name: 1}
        table[(name, unit)] = {name: 1}
    return table


def _first_violation(a: FiniteDGA) -> Optional[Tuple[str, Any]]:
    one = {e.name: a.cochain(e.name) for e in a.basis}
    unit = one[a.unit]
    for name, x in one.items():
        if not a.d(a.d(x)).is_zero:
            return f"d(d({name})) != 0", name
    for name, x in one.items():
        if a.multiply(unit, x) != x or a.multiply(x, unit) != x:
            return f"unit does not act as the identity on {name}", name
    if not a.d(unit).is_zero:
        return "d(unit) != 0", a.unit
    for (nx, x), (ny, y) in itertools.product(one.items(), repeat=2):
        if x.degree + y.degree > a.top_degree:
            continue
        left = a.d(a.multiply(x, y))
        sign = -1 if x.degree % 2 else 1
        right = a.add(a.multiply(a.d(x), y), a.multiply(x, a.d(y)), signs=[1, sign])
        if left != right:
            return f"Leibniz rule fails: d({nx}*{ny}) = {left}, expected {right}", (nx, ny)
    for (nx, x), (ny, y), (nz, z) in itertools.product(one.items(), repeat=3):
        if x.degree + y.degree + z.degree > a.top_degree:
            continue
        if a.multiply(a.multiply(x, y), z) != a.multiply(x, a.multiply(y, z)):
            return f"({nx}*{ny})*{nz} != {nx}*({ny}*{nz})", (nx, ny, nz)
    if not a.allow_noncommutative:
        for (nx, x), (ny, y) in itertools.combinations(one.items(), 2):
            sign = -1 if (x.degree * y.degree) % 2 else 1
            yx = a.multiply(y, x)
            if a.multiply(x, y) != a.add(yx, signs=[sign]):
                return f"{nx}*{ny} is not (-1)^(|{nx}||{ny}|) {ny}*{nx}", (nx, ny)
        for nx, x in one.items():
            if x.degree % 2 and not a.multiply(x, x).is_zero and a.coefficients.characteristic != 2:
                return f"{nx}*{nx} != 0 for an odd-degree element", (nx, nx)
    return None


def validate_dga(a: FiniteDGA) -> Verdict:
    """
    Scan the defining identities on basis elements.

    The first violated identity is reported together with the offending
    basis names as witness.
    """
    violation = _first_violation(a)
    if violation is not None:
        detail, witness = violation
        return Verdict("dga identities", VerdictStatus.FAIL, detail, witness)
    return Verdict("dga identities", VerdictStatus.PASS, f"{len(a.basis)} basis elements")


def _require_valid(a: FiniteDGA) -> None:
    verdict = validate_dga(a)
    if verdict.failed:
        raise ValueError(f"Invalid DGA: {verdict.detail}")


def dga_cohomology(a: FiniteDGA) -> GradedModule:
    """ker(d) / im(d) per degree by Smith normal form, with torsion over Z."""
    _require_valid(a)
    coefficients = a.coefficients
    entries = []
    for degree in range(a.top_degree + 1):
        size = len(a.names(degree))
        outgoing = smith_diagonal(a.coboundary(degree))
        incoming = smith_diagonal(a.coboundary(degree - 1)) if degree > 0 else ()
        rank_out = sum(1 for x in outgoing if not coefficients.is_zero(x))
        rank_in = sum(1 for x in incoming if not coefficients.is_zero(x))
        torsion = () if coefficients.is_field else tuple(x for x in incoming if x > 1)
        entries.append((degree, FgModule(coefficients, size - rank_out - rank_in, torsion)))
    return GradedModule(coefficients, tuple(entries))


@dataclasses.dataclass(frozen=True)
class MasseyResult:
    defined: bool
    degree: int
    representative: Optional[Cochain] = None
    indeterminacy_basis: Tuple[Cochain, ...] = ()
    nonvanishing: bool = False
    detail: str = ""

    @property
    def indeterminacy_trivial(self) -> bool:
        return not self.indeterminacy_basis

    def to_json(self) -> Dict[str, Any]:
        return {
            "defined": self.defined,
            "degree": self.degree,
            "representative": None if self.representative is None else str(self.representative),
            "indeterminacy": [str(c) for c in self.indeterminacy_basis],
            "nonvanishing": self.nonvanishing,
            "detail": self.detail,
        }

    def __str__(self) -> str:
        if not self.defined:
            return f"undefined ({self.detail})"
        verdict = "nonvanishing" if self.nonvanishing else "vanishing"
        indeterminacy = (
            "trivial" if self.indeterminacy_trivial else ", ".join(str(c) for c in self.indeterminacy_basis)
        )
        return f"{verdict}: representative {self.representative} in degree {self.degree}, indeterminacy {indeterminacy}"


def _is_exact(a: FiniteDGA, c: Cochain) -> bool:
    if c.is_zero:
        return True
    return LinearSolver(a.coboundary(c.degree - 1), a.coefficients).solve(a.vector(c)) is not None


def _primitive(
    a: FiniteDGA, target: Cochain, rng: Optional[np.random.Generator]
) -> Optional[Cochain]:
    """Some X with dX = target, shifted by a random cocycle when ``rng`` is given."""
    degree = target.degree - 1
    if degree < 0:
        return None if not target.is_zero else Cochain(-1, {})
    matrix = a.coboundary(degree)
    solution = LinearSolver(matrix, a.coefficients).solve(a.vector(target))
    if solution is None:
        return None
    if rng is not None:
        for k in kernel_basis(matrix, a.coefficients):
            solution = solution + int(rng.integers(-3, 4)) * k
    return a.from_vector(solution, degree)


def _cocycles(a: FiniteDGA, degree: int) -> List[Cochain]:
    if degree < 0:
        return []
    return [a.from_vector(k, degree) for k in kernel_basis(a.coboundary(degree), a.coefficients)]


@allowed_vals(convention=MASSEY_CONVENTIONS)
def triple_massey(
    a: FiniteDGA,
    u: CochainLike,
    v: CochainLike,
    w: CochainLike,
    convention: str = "standard",
    rng: Optional[np.random.Generator] = None,
) -> MasseyResult:
    """
    Triple Massey product <u, v, w> of cocycles.

    With dX = u*v and dY = v*w the representative is
    ``X*w + (-1)^(|u|+1) u*Y`` in the standard convention and
    ``-X*w + (-1)^|u| u*Y`` in the alternate one. The indeterminacy is
    ``u*H^(|v|+|w|-1) + H^(|u|+|v|-1)*w``.

    Parameters:
        a: a valid DGA
        u, v, w: cocycles, as basis names, name combinations or Cochains
        convention: "standard" or "alternate"
        rng: when given, the primitives X and Y are shifted by random cocycles

    Returns:
        MasseyResult; ``defined`` is False when u*v or v*w is not exact
    """
    _require_valid(a)
    cu, cv, cw = (a.cochain(c) for c in (u, v, w))
    for label, c in (("u", cu), ("v", cv), ("w", cw)):
        if not a.d(c).is_zero:
            raise ValueError(f"{label} = {c} is not a cocycle")
    degree = cu.degree + cv.degree + cw.degree - 1
    x = _primitive(a, a.multiply(cu, cv), rng)
    if x is None:
        return MasseyResult(False, degree, detail="u*v is not exact")
    y = _primitive(a, a.multiply(cv, cw), rng)
    if y is None:
        return MasseyResult(False, degree, detail="v*w is not exact")
    xw, uy = a.multiply(x, cw), a.multiply(cu, y)
    if convention == "standard":
        signs = [1, -1 if cu.degree % 2 == 0 else 1]
    else:
        signs = [-1, 1 if cu.degree % 2 == 0 else -1]
    z = a.add(xw, uy, signs=signs)
    assert z.degree == degree
    if not a.d(z).is_zero:
        raise StructuralError(f"Massey representative {z} is not a cocycle")

    candidates = [a.multiply(cu, h) for h in _cocycles(a, cv.degree + cw.degree - 1)]
    candidates += [a.multiply(g, cw) for g in _cocycles(a, cu.degree + cv.degree - 1)]
    indeterminacy = tuple(c for c in candidates if not _is_exact(a, c))

    size = len(a.names(degree))
    columns = [a.vector(c).reshape(-1, 1) for c in indeterminacy]
    columns.append(a.coboundary(degree - 1) if degree > 0 else np.zeros((size, 0), dtype=object))
    span = np.concatenate(columns, axis=1)
    nonvanishing = LinearSolver(span, a.coefficients).solve(a.vector(z)) is None
    logger.debug(f"Massey <{cu}, {cv}, {cw}> = {z}, nonvanishing={nonvanishing}")
    return MasseyResult(True, degree, z, indeterminacy, nonvanishing)


def _inverse_unimodular(t: np.ndarray, coefficients: Coefficients) -> np.ndarray:
    n = t.shape[0]
    if t.shape != (n, n):
        raise ValueError(f"Basis change must be square, got shape {t.shape}")
    decomposition = smith_decomposition(t)
    if decomposition.rank != n or not all(coefficients.is_unit(d) for d in decomposition.diagonal):
        raise ValueError(f"Basis change is not invertible over {coefficients}")
    assert decomposition.left is not None and decomposition.right is not None
    # L T R = D with D a diagonal of units, so T^-1 = R D^-1 L.
    scaled = decomposition.left.copy()
    for i, d in enumerate(decomposition.diagonal):
        scaled[i] = np.array([coefficients.divide(x, d) for x in scaled[i]], dtype=object)
    return matmul(decomposition.right, scaled)


def change_dga_basis(a: FiniteDGA, transforms: Mapping[int, Any]) -> FiniteDGA:
    """
    Rewrite the DGA in a new basis, keeping the basis names.

    ``transforms[d]`` has the new degree-d basis vectors as columns, written
    in the old basis; degrees without a transform are left alone. The unit
    must not be moved.
    """
    coefficients = a.coefficients
    forward: Dict[int, np.ndarray] = {}
    inverse: Dict[int, np.ndarray] = {}
    for degree in range(a.top_degree + 1):
        size = len(a.names(degree))
        if degree in transforms:
            t = as_array(transforms[degree])
            if t.shape != (size, size):
                raise ValueError(f"Transform for degree {degree} must be {size}x{size}")
        else:
            t = np.identity(size, dtype=int).astype(object)
        forward[degree] = t
        inverse[degree] = _inverse_unimodular(t, coefficients) if size else t

    def new_column(degree: int, j: int) -> Cochain:
        return a.from_vector(forward[degree][:, j], degree)

    def rewrite(c: Cochain) -> NameCombination:
        if c.is_zero:
            return {}
        coordinates = matmul(inverse[c.degree], a.vector(c).reshape(-1, 1)).reshape(-1)
        return dict(a.from_vector(reduce_vector(coordinates, coefficients), c.degree).terms)

    columns = {}
    for degree in range(a.top_degree + 1):
        for j, name in enumerate(a.names(degree)):
            columns[name] = new_column(degree, j)
    if columns[a.unit] != a.cochain(a.unit):
        raise ValueError("Basis change must fix the unit")
    differential = {name: rewrite(a.d(c)) for name, c in columns.items()}
    products = {}
    for (nx, x), (ny, y) in itertools.product(columns.items(), repeat=2):
        if x.degree + y.degree > a.top_degree:
            continue
        value = rewrite(a.multiply(x, y))
        if value:
            products[(nx, ny)] = value
    return FiniteDGA(
        coefficients, a.basis, differential, products, a.unit, a.allow_noncommutative
    )


def rebase_cochain(a: FiniteDGA, transforms: Mapping[int, Any], c: CochainLike) -> Cochain:
    """Coordinates of an old-basis cochain in the basis of ``change_dga_basis(a, transforms)``."""
    c = a.cochain(c)
    if c.degree not in transforms:
        return c
    t = as_array(transforms[c.degree])
    coordinates = matmul(
        _inverse_unimodular(t, a.coefficients), a.vector(c).reshape(-1, 1)
    ).reshape(-1)
    return a.from_vector(reduce_vector(coordinates, a.coefficients), c.degree)


def exterior_dga(generators: int, coefficients: Optional[Coefficients] = None) -> FiniteDGA:
    """Exterior algebra on degree-1 generators with zero differential."""
    if generators < 0:
        raise ValueError(f"Generator count must be non-negative, got {generators}")
    coefficients = coefficients or Coefficients.integers()
    check_degree(generators, "Exterior algebra top degree")
    subsets = [
        s for r in range(generators + 1) for s in itertools.combinations(range(1, generators + 1), r)
    ]

    separator = "_" if generators > 9 else ""

    def name(s: Tuple[int, ...]) -> str:
        return "e" + separator.join(str(i) for i in s) if s else "1"

    basis = tuple(BasisElement(name(s), len(s)) for s in subsets)
    products: Dict[Tuple[str, str], NameCombination] = {}
    for s in subsets:
        for t in subsets:
            if set(s) & set(t):
                continue
            merged = s + t
            inversions = sum(1 for i in range(len(merged)) for j in range(i + 1, len(merged)) if merged[i] > merged[j])
            products[(name(s), name(t))] = {name(tuple(sorted(merged))): -1 if inversions % 2 else 1}
    return FiniteDGA(coefficients, basis, {}, products)


def borromean_fixture() -> FiniteDGA:
    """
    Integral model of the Borromean-link complement's cochain algebra.

    Three degree-2 classes x1, x2, x3 (dual to the three linking spheres)
    multiply pairwise to w_ij, which is exact: d(y_ij) = w_ij. The triple
    product t = x1 x2 x3 is hit from the degree-5 elements v_i, and
    v3 - v1 is the cocycle carrying the nonvanishing Massey product. This is
    a finite model adequate for the Massey computation, not the full
    cochain algebra of the complement.
    """
    degrees = {
        "1": 0,
        "x1": 2, "x2": 2, "x3": 2,
        "y12": 3, "y13": 3, "y23": 3,
        "w12": 4, "w13": 4, "w23": 4,
        "v1": 5, "v2": 5, "v3": 5,
        "t": 6,
    }
    basis = tuple(BasisElement(n, d) for n, d in degrees.items())
    differential = {
        "y12": {"w12": 1}, "y13": {"w13": 1}, "y23": {"w23": 1},
        "v1": {"t": 1}, "v2": {"t": 1}, "v3": {"t": 1},
    }
    products = _unit_products(list(degrees), "1")
    pairs = {("x1", "x2"): "w12", ("x1", "x3"): "w13", ("x2", "x3"): "w23"}
    for (a, b), w in pairs.items():
        products[(a, b)] = {w: 1}
        products[(b, a)] = {w: 1}
    # x_i times the y or w not involving index i.
    complementary = {"x1": ("y23", "w23", "v1"), "x2": ("y13", "w13", "v2"), "x3": ("y12", "w12", "v3")}
    for x, (y, w, v) in complementary.items():
        products[(x, y)] = {v: 1}
        products[(y, x)] = {v: 1}
        products[(x, w)] = {"t": 1}
        products[(w, x)] = {"t": 1}
    return FiniteDGA(Coefficients.integers(), basis, differential, products)
