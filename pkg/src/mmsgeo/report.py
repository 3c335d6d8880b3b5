"""Verdict records, reports, and canonical CSV/JSON serialization.

Every numerical check in the package produces a :class:`Verdict` naming
the claim it tests (a stable anchor string), the measured value, the
bound it is compared against, and the remaining slack. Reports bundle
verdicts with plot-ready tables.

CSV output is canonical: header row, ``%.12g`` floats, ``.`` decimal
separator, LF line endings. Identical inputs produce byte-identical
files regardless of worker count.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Any


def fmt(x) -> str:
    if isinstance(x, float):
        return "%.12g" % x
    return str(x)


@dataclass
class Verdict:
    """Outcome of one checked (in)equality."""

    name: str
    anchor: str
    measured: float
    bound: float
    slack: float
    passed: bool
    note: str = ""
    informational: bool = False


@dataclass
class Report:
    """Machine-readable record of one experiment or check bundle."""

    title: str
    verdicts: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def check(self, name, anchor, measured, bound, *, mode="le",
              note="", informational=False) -> Verdict:
        """Record measured-vs-bound; mode 'le'/'ge'/'eq0' sets the slack sign."""
        measured = float(measured)
        bound = float(bound)
        if mode == "le":
            slack = bound - measured
        elif mode == "ge":
            slack = measured - bound
        elif mode == "eq0":
            slack = -abs(measured - bound)
        else:
            raise ValueError(mode)
        v = Verdict(name, anchor, measured, bound, slack, slack >= 0,
                    note=note, informational=informational)
        self.verdicts.append(v)
        return v

    def add_table(self, name, header, rows):
        self.tables[name] = (list(header), [list(r) for r in rows])

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts if not v.informational)

    def verdict_rows(self):
        header = ["name", "anchor", "measured", "bound", "slack", "passed",
                  "informational", "note"]
        rows = [[v.name, v.anchor, v.measured, v.bound, v.slack,
                 int(v.passed), int(v.informational), v.note]
                for v in self.verdicts]
        return header, rows

    def summary_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "verdicts": [
                {"name": v.name, "anchor": v.anchor, "measured": v.measured,
                 "bound": v.bound, "slack": v.slack, "passed": v.passed,
                 "informational": v.informational, "note": v.note}
                for v in self.verdicts
            ],
            "meta": self.meta,
        }


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(x) for x in row])


def write_report(report: Report, outdir, stem: str):
    """Dump verdicts + tables as CSV and a JSON summary; returns file list."""
    import os

    os.makedirs(outdir, exist_ok=True)
    files = []
    header, rows = report.verdict_rows()
    path = os.path.join(outdir, "%s_verdicts.csv" % stem)
    write_csv(path, header, rows)
    files.append(path)
    for name, (theader, trows) in report.tables.items():
        path = os.path.join(outdir, "%s_%s.csv" % (stem, name))
        write_csv(path, theader, trows)
        files.append(path)
    path = os.path.join(outdir, "%s_summary.json" % stem)
    with open(path, "w") as fh:
        json.dump(report.summary_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    files.append(path)
    return files
