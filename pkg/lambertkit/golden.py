"""
Checked-in figure and table transcriptions, and their recomputation.

Every CSV is a full rectangular grid (zeros above the diagonal for matrices);
POLY_D cells use the human syntax of PolyD.parse.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from lambertkit.arith import classical
from lambertkit.convolution import ds_table, rho_table
from lambertkit.factorization import FactorizationPair, LambertParams, gamma_table, snk_matrix
from lambertkit.kernel import Ring, RingElement, SingularReport, format_cell, parse_cell, tri_invert
from lambertkit.qseries import pochhammer

logger = logging.getLogger(__name__)

GOLDEN_DIR = Path(__file__).parent / "goldens"

TARGETS = ("fig1", "fig2", "table1", "table2")


@dataclass
class GoldenResult:
    name: str
    entries: int
    mismatches: list[tuple[int, int, str, str]] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "entries": self.entries,
            "matches": self.matches,
            "mismatches": [
                {"row": r, "col": c, "expected": e, "computed": g} for r, c, e, g in self.mismatches
            ],
        }


def load_golden(name: str, ring: Ring = Ring.INT) -> list[list[RingElement]]:
    with open(GOLDEN_DIR / f"{name}.csv", newline="") as fh:
        return [[parse_cell(cell, ring) for cell in row] for row in csv.reader(fh)]


def write_csv(path: Path, rows: list[list[str]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    return path


def _grid(rows: list[list[RingElement]]) -> list[list[str]]:
    return [[format_cell(x) for x in row] for row in rows]


def _figure(d_param: bool, N: int) -> dict[str, list[list[str]]]:
    fp = FactorizationPair(pochhammer(1, 1, N), LambertParams(1, 0, 2, 1), d_param)
    s = snk_matrix(fp, N)
    sinv = tri_invert(s)
    if isinstance(sinv, SingularReport):
        raise ValueError(f"figure matrix unexpectedly singular at row {sinv.row}")
    return {"s": s.to_csv_rows(), "sinv": sinv.to_csv_rows(), "gamma": gamma_table(sinv).to_csv_rows()}


_BUILDERS: dict[str, Callable[[], dict[str, list[list[str]]]]] = {
    "fig1": lambda: _figure(False, 16),
    "fig2": lambda: _figure(True, 10),
    "table1": lambda: {"ds": _grid(ds_table(classical("one"), 21, 50))},
    "table2": lambda: {"rho": _grid(rho_table(1, classical("eps"), 21, 10))},
}

_RINGS = {"fig1": Ring.INT, "fig2": Ring.POLY_D, "table1": Ring.INT, "table2": Ring.INT}


def _expand(target: str) -> tuple[str, ...]:
    if target == "all":
        return TARGETS
    if target not in TARGETS:
        raise ValueError(f"unknown golden target {target!r}; use one of {', '.join(TARGETS)} or all")
    return (target,)


def compute_tables(target: str) -> dict[str, list[list[str]]]:
    """File stem (e.g. 'fig1_sinv') → computed grid of canonical cells."""
    out = {}
    for t in _expand(target):
        for part, grid in _BUILDERS[t]().items():
            out[f"{t}_{part}"] = grid
    return out


def compare(target: str = "all") -> list[GoldenResult]:
    results = []
    for t in _expand(target):
        ring = _RINGS[t]
        for part, grid in _BUILDERS[t]().items():
            name = f"{t}_{part}"
            expected = load_golden(name, ring)
            computed = [[parse_cell(cell, ring) for cell in row] for row in grid]
            result = GoldenResult(name, sum(len(r) for r in expected))
            if len(expected) != len(computed):
                result.mismatches.append((0, 0, f"{len(expected)} rows", f"{len(computed)} rows"))
            for r, (erow, crow) in enumerate(zip(expected, computed), start=1):
                for c, (e, g) in enumerate(zip(erow, crow), start=1):
                    if e != g:
                        result.mismatches.append((r, c, format_cell(e), format_cell(g)))
            if result.matches:
                logger.info("golden %s: %d entries match", name, result.entries)
            else:
                logger.warning("golden %s: %d mismatches", name, len(result.mismatches))
            results.append(result)
    return results


def emit(target: str, out_dir: Path) -> list[Path]:
    return [write_csv(Path(out_dir) / f"{name}.csv", grid) for name, grid in compute_tables(target).items()]
