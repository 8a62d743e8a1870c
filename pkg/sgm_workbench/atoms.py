"""
Atom types: closed, connected manifolds the elementary polyhedra start from.

Atoms carry the metadata the classification rules read (connectivity,
spin, signature, ...) together with their integral homology. The built-in
table holds standard spheres and the named manifolds the whitelist checks
refer to; user tables are JSON lists with the same fields.
"""

import dataclasses
import json
import logging
from pathlib import Path
import re
from typing import Any, Dict, Iterable, Mapping, Optional, Union

from sgm_workbench.graded_algebra import Coefficients, GradedModule
from sgm_workbench.workbench_utils import check_degree, get_settings

logger = logging.getLogger("sgm_workbench")

Z = Coefficients.integers()

_SPHERE_NAME = re.compile(r"^S(\d+)$")


def sphere_homology(dim: int) -> GradedModule:
    """Homology of S^dim; S^0 is the one-point set."""
    if dim == 0:
        return GradedModule.point(Z)
    return GradedModule.from_ranks(Z, {0: 1, dim: 1})


@dataclasses.dataclass(frozen=True)
class AtomType:
    name: str
    dim: int
    homology: GradedModule
    is_manifold: bool = True
    simply_connected: bool = True
    connectivity: int = 0
    orientable: bool = True
    homotopy_sphere: bool = False
    standard_sphere: bool = False
    spin: Optional[bool] = None
    signature: Optional[int] = None

    def __post_init__(self) -> None:
        if self.dim < 0:
            raise ValueError(f"Atom {self.name}: negative dimension {self.dim}")
        check_degree(self.dim, f"Atom {self.name} dimension")
        if self.homology.coefficients != Z:
            raise ValueError(f"Atom {self.name}: homology must be integral")
        if self.homology.top_degree > self.dim:
            raise ValueError(
                f"Atom {self.name}: homology in degree {self.homology.top_degree} above dimension {self.dim}"
            )
        if self.homology[0] != GradedModule.point(Z)[0]:
            raise ValueError(f"Atom {self.name}: must be connected (H_0 = Z)")
        if self.standard_sphere and not self.homotopy_sphere:
            raise ValueError(f"Atom {self.name}: a standard sphere is a homotopy sphere")
        if self.homotopy_sphere and self.homology != sphere_homology(self.dim):
            raise ValueError(
                f"Atom {self.name}: homotopy sphere with homology {self.homology}"
            )
        if self.signature is not None and (
            self.dim % 4 != 0 or self.dim == 0 or not self.orientable
        ):
            raise ValueError(
                f"Atom {self.name}: signature needs an orientable manifold of dimension 4k"
            )
        if self.is_manifold and self.dim > 0:
            top = self.homology[self.dim]
            if self.orientable and (top.free_rank != 1 or top.torsion):
                raise ValueError(
                    f"Atom {self.name}: closed orientable manifold needs H_{self.dim} = Z"
                )
            if not self.orientable and not top.is_zero:
                raise ValueError(
                    f"Atom {self.name}: closed non-orientable manifold has H_{self.dim} = 0"
                )
        if self.connectivity >= 1 and not self.simply_connected:
            raise ValueError(
                f"Atom {self.name}: connectivity {self.connectivity} needs simple connectivity"
            )
        for degree, module in self.homology.reduced():
            if degree <= self.connectivity and not module.is_zero:
                raise ValueError(
                    f"Atom {self.name}: homology in degree {degree} contradicts connectivity {self.connectivity}"
                )

    @property
    def is_sphere_atom(self) -> bool:
        """Printed as ``S<d>`` rather than ``@name``."""
        match = _SPHERE_NAME.match(self.name)
        return bool(match) and self.standard_sphere and int(match.group(1)) == self.dim

    def to_json(self) -> Dict[str, Any]:
        out = {
            f.name: getattr(self, f.name)
            for f in dataclasses.fields(self)
            if f.name != "homology"
        }
        out["homology"] = self.homology.to_json()
        return out

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "AtomType":
        fields = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - fields
        if unknown:
            raise ValueError(f"Unknown atom fields: {sorted(unknown)}")
        kwargs = dict(data)
        kwargs["homology"] = GradedModule.from_json(Z, data.get("homology", {"0": 1}))
        return cls(**kwargs)


def sphere_atom(dim: int) -> AtomType:
    check_degree(dim, "Sphere dimension")
    if dim == 0:
        # Contractible, so every reduced group vanishes.
        connectivity = get_settings().degree_cap
    else:
        connectivity = dim - 1
    return AtomType(
        name=f"S{dim}",
        dim=dim,
        homology=sphere_homology(dim),
        simply_connected=dim != 1,
        connectivity=connectivity,
        homotopy_sphere=True,
        standard_sphere=True,
        spin=True,
        signature=0 if dim % 4 == 0 and dim > 0 else None,
    )


def _named(
    name: str,
    dim: int,
    homology: Mapping[str, Any],
    **metadata: Any,
) -> AtomType:
    return AtomType(
        name=name,
        dim=dim,
        homology=GradedModule.from_json(Z, homology),
        **metadata,
    )


def builtin_atoms() -> Dict[str, AtomType]:
    table = {f"S{d}": sphere_atom(d) for d in range(10)}
    named = [
        _named("S2xS2", 4, {"0": 1, "2": 2, "4": 1}, connectivity=1, spin=True, signature=0),
        _named(
            "S2xS2#S2xS2", 4, {"0": 1, "2": 4, "4": 1}, connectivity=1, spin=True, signature=0
        ),
        _named("CP2", 4, {"0": 1, "2": 1, "4": 1}, connectivity=1, spin=False, signature=1),
        _named(
            "CP2#CP2bar", 4, {"0": 1, "2": 2, "4": 1}, connectivity=1, spin=False, signature=0
        ),
        _named("S2xS3", 5, {"0": 1, "2": 1, "3": 1, "5": 1}, connectivity=1, spin=True),
        # Non-trivial S^3-bundle over S^2.
        _named("S2~S3", 5, {"0": 1, "2": 1, "3": 1, "5": 1}, connectivity=1, spin=False),
        # SU(3)/SO(3).
        _named(
            "Wu", 5, {"0": 1, "2": {"rank": 0, "torsion": [2]}, "5": 1}, connectivity=1, spin=False
        ),
    ]
    table.update({atom.name: atom for atom in named})
    return table


AtomTable = Dict[str, AtomType]


def load_atom_table(
    source: Union[str, Path, Iterable[Mapping[str, Any]]],
    base: Optional[AtomTable] = None,
) -> AtomTable:
    """Merge a JSON atom list (path or parsed) over ``base`` (default: built-ins)."""
    table = dict(builtin_atoms() if base is None else base)
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as f:
            entries = json.load(f)
    else:
        entries = list(source)
    if isinstance(entries, dict):
        entries = entries.get("atoms", [])
    for entry in entries:
        atom = AtomType.from_json(entry)
        if atom.name in table:
            logger.info(f"Atom table entry {atom.name} overrides an existing atom")
        table[atom.name] = atom
    return table
