"""Deterministic CSV / markdown rendering of run reports and partitions.

CSV output is UTF-8 with LF line endings and unquoted fields; every value
written here is free of commas by construction.
"""

import logging
from typing import Iterable, List, Optional, Sequence

from ..core import from_unit_cube
from ..geometry import group_diagonal, key_to_point
from ..selection import non_dominated
from .criteria import ClassReport

log = logging.getLogger(__name__)

REPORT_COLUMNS = ("problem_id", "algorithm", "trials", "intervals", "solved", "stop_reason")
SNAPSHOT_COLUMNS = ("kind", "id", "group", "lower", "upper", "point", "value", "d", "F", "on_hull")

ALGORITHM_TITLES = {"direct": "DIRECT", "directl": "DIRECT-l", "adc": "New"}

CLAMP_NOTE = "unsolved problems counted at t_max so C1 and C3 are lower estimates"


def _num(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _coords(values) -> str:
    return ";".join(repr(float(v)) for v in values)


def _csv(rows: Iterable[Sequence]) -> bytes:
    lines = []
    for row in rows:
        cells = [_num(c) for c in row]
        for c in cells:
            if "," in c or "\n" in c:
                raise ValueError(f"value {c!r} cannot be written unquoted")
        lines.append(",".join(cells))
    return ("\n".join(lines) + "\n").encode("utf-8")


def summary_rows(report: ClassReport, reference: Optional[ClassReport] = None) -> List[tuple]:
    """(metric, value) pairs of the class criteria."""
    if not len(report):
        return []
    rows = [
        ("problems", len(report)),
        ("solved", report.solved_count),
        ("t_max", report.t_max),
        ("C1", report.C1),
        ("s_star", report.s_star),
        ("C2", report.C2),
        ("C3", round(report.C3, 3)),
        ("half", report.half),
    ]
    if reference is not None:
        wl = report.C4(reference)
        rows += [
            ("C4_reference", reference.algorithm),
            ("C4_p", wl.p),
            ("C4_q", wl.q),
            ("C4_ties", wl.ties),
        ]
    if not report.all_solved:
        rows.append(("note", CLAMP_NOTE))
    return rows


def _problem_rows(report: ClassReport):
    for i, pid in enumerate(report.problem_ids):
        yield (
            pid,
            report.algorithm,
            report.raw_trials[i],
            report.intervals[i],
            "true" if report.solved[i] else "false",
            report.stop_reasons[i],
        )


def _budget_cell(value: int, enough: bool, t_max: int) -> str:
    return str(value) if enough else f">{t_max}"


def _class_cells(report: ClassReport) -> List[str]:
    params = report.params
    if params is None:
        return [report.label or "-"] + ["-"] * 4
    return [
        str(params.N),
        str(params.M),
        f"{params.f_star:g}",
        f"{params.rho_star:g}",
        f"{params.r_star:g}",
    ]


def _half_cell(report: ClassReport) -> str:
    need = (len(report) + 1) // 2
    return _budget_cell(report.half, report.solved_count >= need, report.t_max)


def _full_cell(report: ClassReport) -> str:
    return _budget_cell(report.C1, report.all_solved, report.t_max)


def _markdown_table(header: Sequence[str], rows: Iterable[Sequence]) -> List[str]:
    out = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    for row in rows:
        out.append("| " + " | ".join(_num(c) for c in row) + " |")
    return out


def class_table(reports: Sequence[ClassReport]) -> bytes:
    """Side-by-side 50% / 100% budgets of several algorithms on one class."""
    if not reports:
        raise ValueError("no reports given")
    names = [ALGORITHM_TITLES.get(r.algorithm, r.algorithm) for r in reports]
    header = ["N", "M", "f*", "rho*", "r*"]
    header += [f"{n} 50%" for n in names] + [f"{n} 100%" for n in names]
    row = _class_cells(reports[0])
    row += [_half_cell(r) for r in reports] + [_full_cell(r) for r in reports]
    return ("\n".join(_markdown_table(header, [row])) + "\n").encode("utf-8")


def emit_report(
    report: ClassReport, fmt: str = "csv", reference: Optional[ClassReport] = None
) -> bytes:
    """Per-problem rows followed by a criteria summary block.

    An empty report renders as the header alone.
    """
    if fmt == "csv":
        rows: List[Sequence] = [REPORT_COLUMNS]
        rows += list(_problem_rows(report))
        summary = summary_rows(report, reference)
        if summary:
            body = _csv(rows) + b"\n" + _csv([("metric", "value")] + summary)
        else:
            body = _csv(rows)
        return body
    if fmt in ("md", "markdown"):
        lines = []
        if len(report):
            title = ALGORITHM_TITLES.get(report.algorithm, report.algorithm)
            header = ["N", "M", "f*", "rho*", "r*", f"{title} 50%", f"{title} 100%"]
            lines += _markdown_table(
                header, [_class_cells(report) + [_half_cell(report), _full_cell(report)]]
            )
            lines.append("")
        lines += _markdown_table(REPORT_COLUMNS, _problem_rows(report))
        summary = summary_rows(report, reference)
        if summary:
            lines.append("")
            lines += _markdown_table(("metric", "value"), summary)
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def read_report_csv(data: bytes, algorithm: Optional[str] = None, t_max: Optional[int] = None) -> ClassReport:
    """Rebuild a report from :func:`emit_report` CSV output."""
    text = data.decode("utf-8")
    head, _, tail = text.partition("\n\n")
    lines = head.strip("\n").split("\n")
    if tuple(lines[0].split(",")) != REPORT_COLUMNS:
        raise ValueError("not a report CSV")
    summary = {}
    for line in tail.strip("\n").split("\n")[1:]:
        if line:
            k, _, v = line.partition(",")
            summary[k] = v
    if t_max is None:
        t_max = int(summary.get("t_max", 0)) or 1
    rep = ClassReport(algorithm or "", "", t_max)
    for line in lines[1:]:
        pid, alg, trials, intervals, solved, reason = line.split(",")
        rep.algorithm = rep.algorithm or alg
        rep.problem_ids.append(pid)
        rep.raw_trials.append(int(trials))
        rep.intervals.append(int(intervals))
        rep.solved.append(solved == "true")
        rep.stop_reasons.append(reason)
    return rep


def emit_partition_snapshot(solver, fmt: str = "csv") -> bytes:
    """Boxes, trial points and (d, F) diagram dots of a diagonal-solver state.

    Box and point rows need N <= 2; for larger N only diagram rows are
    written. ``on_hull`` marks the dots selected by the non-dominated hull
    over the full live group range.
    """
    if fmt != "csv":
        raise ValueError("partition snapshots are CSV only")
    part = solver.partition
    problem = solver.problem
    scale = part.scale
    n = part.dim
    rows: List[Sequence] = [SNAPSHOT_COLUMNS]
    live = sorted(part.intervals.values(), key=lambda h: h.id)

    def orig(key):
        return from_unit_cube(problem, key_to_point(key, scale))

    if n <= 2:
        for h in live:
            rows.append(
                ("box", h.id, h.group, _coords(orig(h.lower)), _coords(orig(h.upper)), "", "", "", "", "")
            )
        for i, (key, value) in enumerate(solver.db.items(), start=1):
            rows.append(("point", i, "", "", "", _coords(orig(key)), value, "", "", ""))
    else:
        log.warning("box geometry not exported for N=%d; diagram rows only", n)
    on_hull = set()
    if len(part):
        on_hull = {e.point.interval_id for e in non_dominated(part, part.q, part.Q)}
    for h in live:
        d = 0.5 * group_diagonal(h.group, n)
        rows.append(
            ("diagram", h.id, h.group, "", "", "", "", d, h.F, "true" if h.id in on_hull else "false")
        )
    return _csv(rows)
