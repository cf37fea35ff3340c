"""Comparison tables and branching datasets, rendered as text or machine-readable records."""
from __future__ import annotations

import csv
import io
import json
import math
from collections import defaultdict
from dataclasses import asdict, dataclass

from . import __version__
from .constants import PhysicalConstants, get_constants
from .levels import Level, format_label
from .quantum import qm_decay_channels, qm_rate, transition_omega
from .semiclassical import e2_rate_rescaled, scl_branching_table

__all__ = [
    "TABLE1_TRANSITIONS",
    "Table1Row",
    "BranchingRow",
    "table1_rows",
    "branching_rows",
    "display_format",
    "machine_format",
    "to_csv",
    "to_json",
    "render_table1",
    "render_branching",
]

# (n, l) -> (n', l'), grouped Delta l = -2, 0, +2
TABLE1_TRANSITIONS: tuple[tuple[int, int, int, int], ...] = (
    (3, 2, 1, 0), (4, 2, 1, 0), (5, 2, 1, 0), (6, 2, 1, 0),
    (4, 3, 2, 1), (4, 3, 3, 1), (5, 4, 3, 2), (5, 4, 4, 2),
    (3, 1, 2, 1), (4, 1, 2, 1), (5, 1, 2, 1), (6, 1, 2, 1),
    (4, 2, 3, 2), (5, 2, 3, 2), (5, 3, 4, 3), (6, 3, 5, 3),
    (5, 1, 4, 3), (6, 1, 4, 3), (7, 1, 4, 3), (8, 1, 4, 3),
    (6, 2, 5, 4), (7, 3, 6, 5), (8, 4, 7, 6), (9, 5, 8, 7),
)

PANELS = ("total", "dl-2", "dl0", "dl+2")


@dataclass(frozen=True)
class Table1Row:
    label_i: str
    label_f: str
    delta_l: int
    rate_qm: float
    rate_scl: float


@dataclass(frozen=True)
class BranchingRow:
    panel: str
    series: str
    dn_or_k: float
    delta_l: int | None
    f_thz: float
    rate_s: float
    branching_percent: float


def display_format(v: float, compact: bool | None = None) -> str:
    """Three significant figures; ``x.y(-i)`` compact notation when ``compact``
    (default: for values below 0.01)."""
    if v == 0:
        return "0"
    r = float(f"{v:.3g}")
    if compact is None:
        compact = r < 0.01
    if compact:
        mant, exp = f"{v:.1e}".split("e")
        return f"{mant}({int(exp)})"
    if r >= 100:
        return f"{r:.0f}."
    if r >= 10:
        return f"{r:.1f}"
    if r >= 1:
        return f"{r:.2f}"
    return f"{r:.3f}"


def machine_format(v: float) -> str:
    return f"{v:.9e}"


def table1_rows(Z: int = 1, constants: PhysicalConstants | None = None,
                transitions=TABLE1_TRANSITIONS) -> list[Table1Row]:
    c = constants or get_constants()
    rows = []
    for n, l, n2, l2 in transitions:
        qm = qm_rate(n, l, n2, l2, Z, c).rate
        scl = e2_rate_rescaled(Level(n, l, Z), n - n2, l2 - l, c).rate
        rows.append(Table1Row(format_label(n, l), format_label(n2, l2), l2 - l, qm, scl))
    return rows


def _panel(dl: int) -> str:
    return {-2: "dl-2", 0: "dl0", 2: "dl+2"}[dl]


def branching_rows(initial: Level, denominator: str = "e2",
                   constants: PhysicalConstants | None = None) -> tuple[list[BranchingRow], dict]:
    """Four-panel branching dataset: totals per Delta n (or k) and per-Delta-l series.

    Quantum percentages are always relative to the E2 total. Returns the rows
    and a metadata dict describing the Fourier truncation.
    """
    c = constants or get_constants()
    qm = qm_decay_channels(initial, c)
    qm_total = math.fsum(r.rate for r in qm)
    table = scl_branching_table(initial, "E2", denominator, c)

    per_dl: list[BranchingRow] = []
    for r in qm:
        pct = 100.0 * r.rate / qm_total if qm_total else 0.0
        per_dl.append(BranchingRow(_panel(r.delta_l), "quantum", r.order, r.delta_l,
                                   r.frequency / 1e12, r.rate, pct))
    extra: list[BranchingRow] = []
    for b in table.branches:
        r = b.record
        row = BranchingRow(_panel(r.delta_l) if r.multipole == "E2" else "e1", r.method.value,
                           r.order, r.delta_l, r.frequency / 1e12, r.rate, b.percent)
        (per_dl if r.multipole == "E2" else extra).append(row)

    totals: list[BranchingRow] = []
    for series in ("quantum", "fourier", "rescaled"):
        rate = defaultdict(float)
        pct = defaultdict(float)
        freq = {}
        for row in per_dl:
            if row.series == series:
                rate[row.dn_or_k] += row.rate_s
                pct[row.dn_or_k] += row.branching_percent
                freq[row.dn_or_k] = row.f_thz
        for key in sorted(rate):
            f = freq[key]
            if series != "fourier":
                f = transition_omega(initial.n, initial.n - int(key), initial.Z, c) / (2e12 * math.pi)
            totals.append(BranchingRow("total", series, key, None, f, rate[key], pct[key]))

    order = {p: i for i, p in enumerate(PANELS + ("e1",))}
    series_order = {"quantum": 0, "fourier": 1, "rescaled": 2}
    rows = sorted(totals + per_dl + extra,
                  key=lambda r: (order[r.panel], series_order[r.series], r.dn_or_k,
                                 r.delta_l if r.delta_l is not None else 0))
    meta = {
        "initial": initial.label,
        "Z": initial.Z,
        "denominator": denominator,
        "quantum_denominator": "e2",
        "fourier_k_max": table.k_max,
        "fourier_tail_estimate": table.tail_estimate,
        "fourier_truncated": table.truncated,
    }
    return rows, meta


# --------------------------------------------------------------------------
# rendering
# --------------------------------------------------------------------------

def _machine_row(row) -> dict:
    out = {}
    for k, v in asdict(row).items():
        if isinstance(v, float):
            out[k] = machine_format(v)
        elif v is None:
            out[k] = ""
        else:
            out[k] = v
    return out


def to_csv(rows) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    fields = list(asdict(rows[0]))
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(_machine_row(row))
    return buf.getvalue()


def to_json(rows, metadata: dict) -> str:
    records = []
    for row in rows:
        rec = {}
        for k, v in asdict(row).items():
            rec[k] = float(machine_format(v)) if isinstance(v, float) else v
        records.append(rec)
    meta = {"version": __version__, **metadata}
    return json.dumps({"metadata": meta, "records": records}, indent=2) + "\n"


def render_table1(rows: list[Table1Row]) -> str:
    titles = {-2: "Delta l = -2", 0: "Delta l = 0", 2: "Delta l = +2"}
    head = "(n,l) -> (n',l')"
    lines = [f"{head:<20}{'QM':>12}{'SCL':>12}"]
    current = None
    for r in rows:
        if r.delta_l != current:
            current = r.delta_l
            lines.append(f"-- {titles[current]} " + "-" * 28)
        # a row is printed in one style, as in the published table
        compact = min(r.rate_qm, r.rate_scl) < 0.01
        lines.append(f"{r.label_i + ' -> ' + r.label_f:<20}{display_format(r.rate_qm, compact):>12}"
                     f"{display_format(r.rate_scl, compact):>12}")
    return "\n".join(lines) + "\n"


def render_branching(rows: list[BranchingRow]) -> str:
    lines = [f"{'panel':<7}{'series':<10}{'dn/k':>8}{'dl':>5}{'f [THz]':>12}"
             f"{'rate [1/s]':>16}{'branch [%]':>14}"]
    for r in rows:
        dl = "" if r.delta_l is None else f"{r.delta_l:+d}"
        order = f"{r.dn_or_k:g}"
        lines.append(f"{r.panel:<7}{r.series:<10}{order:>8}{dl:>5}{r.f_thz:>12.4f}"
                     f"{r.rate_s:>16.6e}{r.branching_percent:>14.6f}")
    return "\n".join(lines) + "\n"
