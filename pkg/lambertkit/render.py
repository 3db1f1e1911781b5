from pathlib import Path

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from lambertkit.golden import GoldenResult
from lambertkit.variants import ConjectureReport

env = Environment(
    loader=FileSystemLoader(Path(__file__).parent / "templates"),
    autoescape=False,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
    undefined=StrictUndefined,
)

_PREVIEW_ROWS = 12


def golden_summary(results: list[GoldenResult]) -> str:
    """Markdown table of golden comparisons, with the first mismatches of each failing file."""
    return env.get_template("golden_summary.md.j2").render(results=[r.to_json() for r in results])


def conjecture_report(report: ConjectureReport, preview_rows: int = _PREVIEW_ROWS) -> str:
    rows = report.nonzero_rows
    preview = [
        {"n": n, "cells": [(k, str(v)) for k, v in enumerate(report.row_vector(n), start=1) if v]}
        for n in rows[:preview_rows]
    ]
    return env.get_template("conjecture_report.md.j2").render(
        r=report.to_json(), preview=preview, hidden=max(0, len(rows) - preview_rows)
    )
