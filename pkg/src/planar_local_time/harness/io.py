"""CSV and JSON persistence. Everything is written below the output directory."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

SAMPLES_HEADER = ("replica", "statistic", "value")
PATH_HEADER = ("t", "value")

PLOT_SCRIPT = '''"""ECDFs of every statistic in samples.csv (generated by planar-lt)."""
import csv
import collections
import math
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "samples.csv"
groups = collections.defaultdict(list)
with open(path, newline="") as fh:
    for row in csv.DictReader(fh):
        value = float(row["value"])
        if math.isfinite(value):
            groups[row["statistic"]].append(value)
for name, values in sorted(groups.items()):
    values.sort()
    k = len(values)
    plt.step(values, [(i + 1) / k for i in range(k)], where="post", label=name)
plt.ylabel("ECDF")
plt.legend(fontsize="small")
plt.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
'''


def _rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def samples_csv(rows) -> str:
    return _rows_to_csv(SAMPLES_HEADER, ((i, name, repr(float(v))) for i, name, v in rows))


def path_csv(rows) -> str:
    return _rows_to_csv(PATH_HEADER, ((repr(float(t)), repr(float(v))) for t, v in rows))


def read_path_csv(path) -> list[tuple[float, float]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != PATH_HEADER:
            raise ValueError(f"{path}: expected header 't,value'")
        return [(float(t), float(v)) for t, v in reader]


def write_text(out_dir, name: str, text: str) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    target = out / name
    target.write_text(text)
    return target


def write_summary(out_dir, summary, name: str = "summary.json") -> Path:
    """Summary JSON plus samples CSV, plot script and a run-info sidecar."""
    target = write_text(out_dir, name, summary.to_json())
    write_text(out_dir, "samples.csv", samples_csv(summary.samples))
    write_text(out_dir, "plot_samples.py", PLOT_SCRIPT)
    write_text(out_dir, "run_info.json", json.dumps({"wall_clock_seconds": summary.wall_clock}) + "\n")
    return target
