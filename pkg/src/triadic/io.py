"""Edge-list ingestion and report/chart serialization.

JSON documents carry ``"schema_version"``; field layout is described in the
README.  Wedge types are keyed by ``out, path, in, recip_in, recip_out,
recip_tot``; triangle types by ``trans, loop, out_recip, path_recip,
in_recip, two_recip, three_recip``; closures by ``"<wedge>:<triangle>"``.
"""

from __future__ import annotations

import csv
import io
import json
from array import array
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Any

import numpy as np

from .census import CLOSURE_PAIRS, CensusReport, TriangleType, WedgeType, chi
from .errors import IngestionError
from .graph import Digraph, build_digraph

SCHEMA_VERSION = 1


def parse_edge_list(stream: Iterable[str]) -> Iterator[tuple[int, int]]:
    """Yield ``(src, dst)`` pairs from SNAP-style text.

    Blank lines and lines starting with ``#`` are skipped.  Any other line
    must hold exactly two integer tokens separated by whitespace.
    """
    for lineno, line in enumerate(stream, 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise IngestionError(f"line {lineno}: expected 2 tokens, got {len(parts)}", lineno)
        try:
            yield int(parts[0]), int(parts[1])
        except ValueError:
            raise IngestionError(f"line {lineno}: non-integer vertex label in {s!r}", lineno) from None


def read_pairs(path: str | Path) -> np.ndarray:
    buf = array("q")
    with open(path, encoding="utf-8", newline=None) as fh:
        for u, w in parse_edge_list(fh):
            buf.append(u)
            buf.append(w)
    return np.frombuffer(buf, dtype=np.int64).reshape(-1, 2)


def read_digraph(path: str | Path) -> Digraph:
    return build_digraph(read_pairs(path))


def write_edge_list(G: Digraph, out: IO[str]) -> None:
    out.write(f"# n={G.n} m_basic={G.m_basic} m_rec={G.m_rec}\n")
    for u, w in G.edge_list():
        out.write(f"{u}\t{w}\n")


def _f(x) -> float | int:
    return int(x) if isinstance(x, (int, np.integer)) else float(x)


def report_to_dict(rep: CensusReport) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "kind": "estimated" if rep.estimated else "exact",
        "graph": {"n": rep.n, "m_basic": rep.m_basic, "m_rec": rep.m_rec, "edges": rep.m_basic + rep.m_rec},
        "reciprocity": rep.reciprocity,
        "transitivity": rep.transitivity,
        "total_wedges": _f(rep.total_wedges),
        "total_triangles": _f(rep.total_triangles),
        "wedge_counts": {psi.label: _f(rep.wedge_counts[psi]) for psi in WedgeType},
        "triangle_counts": {tau.label: _f(rep.triangle_counts[tau]) for tau in TriangleType},
        "wedge_percentages": {psi.label: p for psi, p in rep.wedge_percentages.items()},
        "triangle_percentages": {tau.label: p for tau, p in rep.triangle_percentages.items()},
        "closures": {f"{psi.label}:{tau.label}": float(rep.closures[(psi, tau)]) for psi, tau in CLOSURE_PAIRS},
        "undefined": list(rep.undefined),
    }
    if rep.estimation is not None:
        doc["estimation"] = rep.estimation
    return doc


def dumps(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


CSV_COLUMNS = (
    "wedge_type",
    "triangle_type",
    "chi",
    "closure",
    "wedge_count",
    "wedge_percentage",
    "triangle_count",
    "triangle_percentage",
)


def report_to_csv(rep: CensusReport) -> str:
    """One row per (wedge type, triangle type) pair with nonzero chi."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    wp, tp = rep.wedge_percentages, rep.triangle_percentages
    for psi, tau in CLOSURE_PAIRS:
        w.writerow(
            [
                psi.label,
                tau.label,
                chi(psi, tau),
                repr(float(rep.closures[(psi, tau)])),
                _f(rep.wedge_counts[psi]),
                repr(wp[psi]),
                _f(rep.triangle_counts[tau]),
                repr(tp[tau]),
            ]
        )
    return buf.getvalue()


@dataclass
class ChartData:
    """Plot-ready directed closure chart.

    One stacked bar per wedge type: its share of all wedges, and one segment
    per triangle type with height ``kappa[psi, tau]``.  Triangle-type shares
    and the undirected transitivity complete the chart.
    """

    wedge_percentages: dict[WedgeType, float]
    segments: dict[WedgeType, dict[TriangleType, float]]
    triangle_percentages: dict[TriangleType, float]
    transitivity: float

    @property
    def bar_heights(self) -> dict[WedgeType, float]:
        return {psi: sum(seg.values()) for psi, seg in self.segments.items()}

    @classmethod
    def from_report(cls, rep: CensusReport) -> ChartData:
        segments = {
            psi: {tau: float(rep.closures[(psi, tau)]) for tau in TriangleType if chi(psi, tau)}
            for psi in WedgeType
        }
        return cls(rep.wedge_percentages, segments, rep.triangle_percentages, rep.transitivity)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "closure_chart",
            "transitivity": self.transitivity,
            "bars": [
                {
                    "wedge_type": psi.label,
                    "wedge_percentage": self.wedge_percentages[psi],
                    "height": self.bar_heights[psi],
                    "segments": {tau.label: v for tau, v in self.segments[psi].items()},
                }
                for psi in WedgeType
            ],
            "triangle_percentages": {tau.label: p for tau, p in self.triangle_percentages.items()},
        }

    def to_csv(self) -> str:
        """Rows ``bar`` (one per wedge type) then one ``triangle_percentage`` row."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        taus = [tau.label for tau in TriangleType]
        w.writerow(["row", "wedge_type", "wedge_percentage", *taus, "height", "transitivity"])
        for psi in WedgeType:
            seg = self.segments[psi]
            w.writerow(
                [
                    "bar",
                    psi.label,
                    repr(self.wedge_percentages[psi]),
                    *(repr(seg.get(tau, 0.0)) for tau in TriangleType),
                    repr(self.bar_heights[psi]),
                    repr(self.transitivity),
                ]
            )
        w.writerow(
            ["triangle_percentage", "", "", *(repr(self.triangle_percentages[tau]) for tau in TriangleType), "", ""]
        )
        return buf.getvalue()
