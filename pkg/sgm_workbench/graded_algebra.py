"""
Coefficient rings and finitely generated graded modules over a PID.

Modules are kept in invariant-factor form: a free rank plus a divisibility
chain of torsion orders. Every constructor re-normalizes, so dataclass
equality is module isomorphism.
"""

from collections import Counter
import dataclasses
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Tuple, Union

from sympy import factorint, isprime

from sgm_workbench.workbench_utils import CoefficientMismatchError, check_degree

Scalar = Union[int, Fraction]


class CoefficientKind(Enum):
    INTEGERS = "Z"
    RATIONALS = "Q"
    INTEGERS_MOD_P = "Zp"


@dataclasses.dataclass(frozen=True)
class Coefficients:
    kind: CoefficientKind
    p: int = 0

    def __post_init__(self) -> None:
        if self.kind is CoefficientKind.INTEGERS_MOD_P:
            if not isprime(self.p):
                raise ValueError(f"Modulus {self.p} is not prime")
        elif self.p != 0:
            raise ValueError(f"{self.kind.value} takes no modulus, got p={self.p}")

    @classmethod
    def integers(cls) -> "Coefficients":
        return cls(CoefficientKind.INTEGERS)

    @classmethod
    def rationals(cls) -> "Coefficients":
        return cls(CoefficientKind.RATIONALS)

    @classmethod
    def mod(cls, p: int) -> "Coefficients":
        return cls(CoefficientKind.INTEGERS_MOD_P, p)

    @classmethod
    def parse(cls, text: str) -> "Coefficients":
        """Parse ``Z``, ``Q`` or ``Zp:<p>``."""
        text = text.strip()
        if text == "Z":
            return cls.integers()
        if text == "Q":
            return cls.rationals()
        if text.startswith("Zp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise ValueError(f"Bad modulus in coefficient spec '{text}'") from None
            return cls.mod(p)
        raise ValueError(f"Unknown coefficients '{text}' (expected Z, Q or Zp:<p>)")

    @property
    def is_field(self) -> bool:
        return self.kind is not CoefficientKind.INTEGERS

    @property
    def characteristic(self) -> int:
        return self.p

    def is_unit(self, x: Scalar) -> bool:
        if self.kind is CoefficientKind.INTEGERS:
            return x in (1, -1)
        if self.kind is CoefficientKind.RATIONALS:
            return x != 0
        return int(x) % self.p != 0

    def is_zero(self, x: Scalar) -> bool:
        if self.kind is CoefficientKind.INTEGERS_MOD_P:
            return int(x) % self.p == 0
        return x == 0

    def reduce(self, x: Scalar) -> Scalar:
        if self.kind is CoefficientKind.INTEGERS_MOD_P:
            return int(x) % self.p
        if isinstance(x, Fraction) and x.denominator == 1:
            return int(x.numerator)
        return x

    def divide(self, a: Scalar, b: Scalar) -> Scalar:
        """Exact quotient a / b, or ValueError when b does not divide a."""
        if self.kind is CoefficientKind.INTEGERS:
            if b == 0 or a % b != 0:
                raise ValueError(f"{b} does not divide {a} over Z")
            return int(a) // int(b)
        if self.kind is CoefficientKind.RATIONALS:
            return self.reduce(Fraction(a) / Fraction(b))
        b_mod = int(b) % self.p
        if b_mod == 0:
            raise ValueError(f"{b} is not invertible mod {self.p}")
        return (int(a) * pow(b_mod, -1, self.p)) % self.p

    def __str__(self) -> str:
        if self.kind is CoefficientKind.INTEGERS_MOD_P:
            return f"Zp:{self.p}"
        return self.kind.value


def _elementary_divisors(factors: Iterable[int]) -> Dict[int, List[int]]:
    by_prime: Dict[int, List[int]] = {}
    for f in factors:
        for prime, exponent in factorint(f).items():
            by_prime.setdefault(prime, []).append(prime**exponent)
    return by_prime


def normalize_invariant_factors(factors: Iterable[int]) -> Tuple[int, ...]:
    """Recombine arbitrary torsion orders into a divisibility chain."""
    factors = [int(f) for f in factors]
    for f in factors:
        if f < 1:
            raise ValueError(f"Torsion orders must be positive, got {f}")
    by_prime = _elementary_divisors(f for f in factors if f > 1)
    if not by_prime:
        return ()
    length = max(len(powers) for powers in by_prime.values())
    chain = [1] * length
    for powers in by_prime.values():
        # Largest power goes into the last (largest) factor.
        for offset, power in enumerate(sorted(powers, reverse=True)):
            chain[length - 1 - offset] *= power
    return tuple(chain)


@dataclasses.dataclass(frozen=True)
class FgModule:
    coefficients: Coefficients
    free_rank: int = 0
    invariant_factors: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError(f"Free rank must be non-negative, got {self.free_rank}")
        if self.coefficients.is_field:
            factors: Tuple[int, ...] = ()
        else:
            factors = normalize_invariant_factors(self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def torsion(self) -> Tuple[int, ...]:
        return self.invariant_factors

    def free_part(self) -> "FgModule":
        return FgModule(self.coefficients, self.free_rank)

    def torsion_part(self) -> "FgModule":
        return FgModule(self.coefficients, 0, self.invariant_factors)

    def to_json(self) -> Dict[str, Any]:
        return {"rank": self.free_rank, "torsion": list(self.invariant_factors)}

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append(
                self.coefficients.kind.value
                if self.free_rank == 1
                else f"{self.coefficients}^{self.free_rank}"
            )
        parts.extend(f"Z/{t}" for t in self.invariant_factors)
        return " + ".join(parts) if parts else "0"


def _same_coefficients(a: FgModule, b: FgModule) -> Coefficients:
    if a.coefficients != b.coefficients:
        raise CoefficientMismatchError(
            f"Coefficient mismatch: {a.coefficients} vs {b.coefficients}"
        )
    return a.coefficients


def module_sum(a: FgModule, b: FgModule) -> FgModule:
    coeffs = _same_coefficients(a, b)
    return FgModule(
        coeffs,
        a.free_rank + b.free_rank,
        a.invariant_factors + b.invariant_factors,
    )


def module_tensor(a: FgModule, b: FgModule) -> FgModule:
    coeffs = _same_coefficients(a, b)
    factors: List[int] = []
    factors.extend(a.invariant_factors * b.free_rank)
    factors.extend(b.invariant_factors * a.free_rank)
    factors.extend(gcd(s, t) for s in a.invariant_factors for t in b.invariant_factors)
    return FgModule(coeffs, a.free_rank * b.free_rank, tuple(factors))


def module_tor(a: FgModule, b: FgModule) -> FgModule:
    coeffs = _same_coefficients(a, b)
    if coeffs.is_field:
        return FgModule(coeffs)
    factors = [gcd(s, t) for s in a.invariant_factors for t in b.invariant_factors]
    return FgModule(coeffs, 0, tuple(factors))


def module_complement(total: FgModule, part: FgModule) -> FgModule:
    """The module C with part + C isomorphic to total."""
    coeffs = _same_coefficients(total, part)
    if part.free_rank > total.free_rank:
        raise ValueError(f"{part} is not a direct summand of {total}")
    remaining = Counter(
        p for ps in _elementary_divisors(total.invariant_factors).values() for p in ps
    )
    for ps in _elementary_divisors(part.invariant_factors).values():
        for power in ps:
            if remaining[power] == 0:
                raise ValueError(f"{part} is not a direct summand of {total}")
            remaining[power] -= 1
    return FgModule(
        coeffs, total.free_rank - part.free_rank, tuple(remaining.elements())
    )


@dataclasses.dataclass(frozen=True)
class GradedModule:
    coefficients: Coefficients
    by_degree: Tuple[Tuple[int, FgModule], ...] = ()

    def __post_init__(self) -> None:
        merged: Dict[int, FgModule] = {}
        for degree, module in self.by_degree:
            if degree < 0:
                raise ValueError(f"Negative degree {degree}")
            _same_coefficients(FgModule(self.coefficients), module)
            if degree in merged:
                module = module_sum(merged[degree], module)
            merged[degree] = module
        entries = tuple(
            (check_degree(d), m) for d, m in sorted(merged.items()) if not m.is_zero
        )
        object.__setattr__(self, "by_degree", entries)

    @classmethod
    def from_mapping(
        cls, coefficients: Coefficients, modules: Mapping[int, FgModule]
    ) -> "GradedModule":
        return cls(coefficients, tuple(modules.items()))

    @classmethod
    def from_ranks(
        cls, coefficients: Coefficients, ranks: Mapping[int, int]
    ) -> "GradedModule":
        return cls(
            coefficients,
            tuple((d, FgModule(coefficients, r)) for d, r in ranks.items()),
        )

    @classmethod
    def point(cls, coefficients: Coefficients) -> "GradedModule":
        return cls.from_ranks(coefficients, {0: 1})

    def __getitem__(self, degree: int) -> FgModule:
        for d, module in self.by_degree:
            if d == degree:
                return module
        return FgModule(self.coefficients)

    def __iter__(self) -> Iterator[Tuple[int, FgModule]]:
        return iter(self.by_degree)

    @property
    def degrees(self) -> List[int]:
        return [d for d, _ in self.by_degree]

    @property
    def top_degree(self) -> int:
        return self.by_degree[-1][0] if self.by_degree else -1

    def rank(self, degree: int) -> int:
        return self[degree].free_rank

    def ranks(self) -> Dict[int, int]:
        return {d: m.free_rank for d, m in self.by_degree if m.free_rank}

    def total_rank(self) -> int:
        return sum(m.free_rank for _, m in self.by_degree)

    @property
    def is_free(self) -> bool:
        return all(not m.invariant_factors for _, m in self.by_degree)

    def reduced(self) -> "GradedModule":
        """Drop one free generator in degree 0 (the augmentation)."""
        h0 = self[0]
        if h0.free_rank < 1:
            raise ValueError("Reduced homology needs a free class in degree 0")
        rest = [(d, m) for d, m in self.by_degree if d != 0]
        rest.append((0, FgModule(self.coefficients, h0.free_rank - 1, h0.torsion)))
        return GradedModule(self.coefficients, tuple(rest))

    def unreduced(self) -> "GradedModule":
        return graded_sum(self, GradedModule.point(self.coefficients))

    def shifted(self, offset: int) -> "GradedModule":
        return GradedModule(
            self.coefficients,
            tuple((d + offset, m) for d, m in self.by_degree if d + offset >= 0),
        )

    def to_json(self) -> Dict[str, Any]:
        return {str(d): m.to_json() for d, m in self.by_degree}

    @classmethod
    def from_json(
        cls, coefficients: Coefficients, data: Mapping[str, Any]
    ) -> "GradedModule":
        entries = []
        for degree, module in data.items():
            if isinstance(module, int):
                module = {"rank": module}
            entries.append(
                (
                    int(degree),
                    FgModule(
                        coefficients,
                        int(module.get("rank", 0)),
                        tuple(module.get("torsion", ())),
                    ),
                )
            )
        return cls(coefficients, tuple(entries))

    def __str__(self) -> str:
        if not self.by_degree:
            return "0"
        return ", ".join(f"{d}: {m}" for d, m in self.by_degree)


def _same_graded(a: GradedModule, b: GradedModule) -> Coefficients:
    if a.coefficients != b.coefficients:
        raise CoefficientMismatchError(
            f"Coefficient mismatch: {a.coefficients} vs {b.coefficients}"
        )
    return a.coefficients


def graded_sum(a: GradedModule, b: GradedModule) -> GradedModule:
    coeffs = _same_graded(a, b)
    return GradedModule(coeffs, a.by_degree + b.by_degree)


def graded_complement(total: GradedModule, part: GradedModule) -> GradedModule:
    coeffs = _same_graded(total, part)
    degrees = set(total.degrees) | set(part.degrees)
    return GradedModule(
        coeffs, tuple((d, module_complement(total[d], part[d])) for d in degrees)
    )


def graded_kunneth(a: GradedModule, b: GradedModule) -> GradedModule:
    """Homology of a product: tensor terms plus the shifted Tor terms."""
    coeffs = _same_graded(a, b)
    entries: List[Tuple[int, FgModule]] = []
    for i, ai in a.by_degree:
        for j, bj in b.by_degree:
            check_degree(i + j)
            entries.append((i + j, module_tensor(ai, bj)))
            tor = module_tor(ai, bj)
            if not tor.is_zero:
                entries.append((check_degree(i + j + 1), tor))
    return GradedModule(coeffs, tuple(entries))


def change_coefficients(h: GradedModule, target: Coefficients) -> GradedModule:
    """Universal coefficients from integral homology to ``target``."""
    if h.coefficients == target:
        return h
    if h.coefficients != Coefficients.integers():
        raise CoefficientMismatchError(
            f"Can only change coefficients from Z, got {h.coefficients}"
        )
    if target.kind is CoefficientKind.RATIONALS:
        return GradedModule.from_ranks(target, h.ranks())
    if target.kind is CoefficientKind.INTEGERS_MOD_P:
        dims: Dict[int, int] = {}
        for d, module in h.by_degree:
            hits = sum(1 for t in module.torsion if t % target.p == 0)
            dims[d] = dims.get(d, 0) + module.free_rank + hits
            dims[d + 1] = dims.get(d + 1, 0) + hits
        return GradedModule.from_ranks(target, dims)
    return h


def cohomology_from_homology(h: GradedModule) -> GradedModule:
    """H^q = free part of H_q plus torsion of H_{q-1}."""
    entries: List[Tuple[int, FgModule]] = []
    for d, module in h.by_degree:
        entries.append((d, module.free_part()))
        if module.torsion:
            entries.append((d + 1, module.torsion_part()))
    return GradedModule(h.coefficients, tuple(entries))
