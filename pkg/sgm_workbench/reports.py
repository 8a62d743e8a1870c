"""Aligned text tables and JSON payloads for command output."""

import dataclasses
import json
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sgm_workbench.graded_algebra import GradedModule
from sgm_workbench.workbench_utils import Verdict


def format_rows(rows: Sequence[Sequence[str]], header: Optional[Sequence[str]] = None) -> str:
    """Left-aligned columns separated by two spaces."""
    cells = [list(header)] if header else []
    cells.extend(list(r) for r in rows)
    if not cells:
        return ""
    widths = [max(len(row[c]) for row in cells) for c in range(len(cells[0]))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in cells]
    if header:
        lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def format_homology(h: GradedModule, label: str = "H") -> str:
    if not h.by_degree:
        return f"{label}: 0"
    rows = [
        [f"{label}_{d}", str(m), str(m.free_rank), ",".join(str(t) for t in m.torsion) or "-"]
        for d, m in h
    ]
    return format_rows(rows, ["degree", f"module ({h.coefficients})", "rank", "torsion"])


def format_verdicts(verdicts: Sequence[Verdict]) -> str:
    rows = []
    for v in verdicts:
        witness = "" if v.witness is None else str(v.witness)
        rows.append([v.check, v.status.value, v.detail, witness])
    return format_rows(rows, ["check", "status", "detail", "witness"])


def _default(value: Any) -> Any:
    to_json = getattr(value, "to_json", None)
    if callable(to_json):
        return to_json()
    if dataclasses.is_dataclass(value):
        return str(value)
    if isinstance(value, (set, frozenset, tuple)):
        return list(value)
    return str(value)


def dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, default=_default)


@dataclasses.dataclass
class Report:
    """One command's output: text sections, a JSON payload and verdicts."""

    title: str
    sections: List[Tuple[str, str]] = dataclasses.field(default_factory=list)
    payload: Dict[str, Any] = dataclasses.field(default_factory=dict)
    verdicts: List[Verdict] = dataclasses.field(default_factory=list)

    def add(self, heading: str, text: str, key: Optional[str] = None, value: Any = None) -> None:
        self.sections.append((heading, text))
        if key is not None:
            self.payload[key] = value

    def add_verdict(self, verdict: Verdict) -> None:
        self.verdicts.append(verdict)

    @property
    def failed(self) -> bool:
        return any(v.failed for v in self.verdicts)

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"title": self.title}
        out.update(self.payload)
        if self.verdicts:
            out["verdicts"] = [v.to_json() for v in self.verdicts]
        out["exit_code"] = self.exit_code
        return out

    def render(self, as_json: bool = False) -> str:
        if as_json:
            return dump_json(self.to_json())
        blocks = [self.title, "=" * len(self.title)]
        for heading, text in self.sections:
            blocks.append(f"\n{heading}\n{text}" if heading else f"\n{text}")
        if self.verdicts:
            blocks.append("\n" + format_verdicts(self.verdicts))
        return "\n".join(blocks)
