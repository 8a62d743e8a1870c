"""Elementary polyhedra, disc-with-holes invariants and the sources of special generic maps."""

from sgm_workbench.graded_algebra import Coefficients, FgModule, GradedModule
from sgm_workbench.invariants import HoleSpec, disc_with_holes_homology, homology_of_term
from sgm_workbench.term_parser import parse_term
from sgm_workbench.workbench_utils import (
    Verdict,
    VerdictStatus,
    WorkbenchSettings,
    configure,
    get_settings,
)

__all__ = [
    "Coefficients",
    "FgModule",
    "GradedModule",
    "HoleSpec",
    "Verdict",
    "VerdictStatus",
    "WorkbenchSettings",
    "configure",
    "disc_with_holes_homology",
    "get_settings",
    "homology_of_term",
    "parse_term",
]
