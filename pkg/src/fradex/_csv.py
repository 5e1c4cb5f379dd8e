"""CSV conventions shared by every writer: 17 significant digits, LF endings."""

from __future__ import annotations

import csv


def fmt(v: float) -> str:
    return format(float(v), ".16e")


def write_rows(path_or_file, header, rows) -> None:
    if hasattr(path_or_file, "write"):
        w = csv.writer(path_or_file, lineterminator="\n")
        if header is not None:
            w.writerow(header)
        w.writerows(rows)
        return
    with open(path_or_file, "w", newline="") as fh:
        write_rows(fh, header, rows)
