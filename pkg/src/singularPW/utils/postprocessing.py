import csv
import os
from pathlib import Path
from typing import Sequence

from singularPW.utils.io import write_csv

# report file -> (series name, x column, y column); "#" as x column means row index
PLOT_SERIES: dict[str, list[tuple[str, str, str]]] = {
    "parseval.csv": [("defect", "order", "defect")],
    "fourier.csv": [("cumulative_energy", "n", "cumulative_energy")],
    "kaczmarz.csv": [
        ("iterate_gap", "n", "iterate_gap"),
        ("residual_exp", "n", "residual_exp"),
        ("residual_dual", "n", "residual_dual"),
    ],
    "reconstruct.csv": [("err", "#", "err")],
    "vmu.csv": [("vmu_diff", "#", "diff")],
    "boundary.csv": [("boundary_error", "r", "error"), ("boundary_tail", "r", "tail_bound")],
    "growth.csv": [
        ("ratio_pos", "y", "ratio_pos"),
        ("ratio_neg", "y", "ratio_neg"),
        ("envelope", "y", "envelope"),
    ],
    "cantor.csv": [("cantor_diff", "n", "diff")],
}


def _single_report(path: Path, series: list[tuple[str, str, str]]) -> list[tuple[str, str, str]]:
    with open(path, encoding="utf-8", newline="") as f:
        table = list(csv.DictReader(f))
    rows = []
    for name, x_key, y_key in series:
        for i, record in enumerate(table):
            if y_key not in record or (x_key != "#" and x_key not in record):
                raise ValueError(f"{path} has no column {y_key!r} or {x_key!r}")
            x = str(i) if x_key == "#" else record[x_key]
            rows.append((name, x, record[y_key]))
    return rows


def emit_plotdata(
    outdir: str | os.PathLike,
    reports: Sequence[str] | None = None,
    filename: str = "plotdata.csv",
) -> Path:
    """
    Collect the curves of the reports in outdir into one long-format CSV
    "series_name, x, y". Nothing is rendered.

    Args:
        outdir (str): Directory holding the reports.
        reports (Sequence[str] | None): Report file names; defaults to every known
            report present in outdir.
        filename (str): Output file name inside outdir.

    Raises:
        FileNotFoundError: if a requested report is missing, or no report exists at all.
    """
    outdir = Path(outdir)
    if reports is None:
        reports = [name for name in PLOT_SERIES if (outdir / name).exists()]
        if not reports:
            raise FileNotFoundError(f"no report found in {outdir}")
    rows = []
    for name in reports:
        path = outdir / name
        if name not in PLOT_SERIES:
            raise ValueError(f"unknown report {name!r}; known: {sorted(PLOT_SERIES)}")
        if not path.exists():
            raise FileNotFoundError(f"missing report {path}")
        rows.extend(_single_report(path, PLOT_SERIES[name]))
    return write_csv(outdir / filename, ("series_name", "x", "y"), rows)
