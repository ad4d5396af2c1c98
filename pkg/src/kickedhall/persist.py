"""CSV/JSON writers, provenance sidecars and emitted plot scripts."""
from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

CONVENTIONS = {
    "kick_frame": "rotating frame, kicks at x_c + j' eta for j' = 0..r-1",
    "x_c_identification": "quantum and classical x_c are the same number",
    "band_product_order": "j = 0 factor leftmost in M_r",
    "w1_argument": "x_c - (2j+1) eta",
    "scaled_width_gap": "2|cos eta| Delta/(l' mu^2)",
    "spread_reference": "fixed point",
}


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (np.integer,)):
        return str(int(x))
    return str(x)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    with os.fdopen(fd, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Deterministic CSV: floats written with ``repr`` so reruns are byte-identical."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    with os.fdopen(fd, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    os.replace(tmp, path)
    return path


def read_csv(path: Path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def write_json(path: Path, payload: dict) -> Path:
    path = Path(path)
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True, default=_json_default) + "\n")
    return path


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return str(obj)


def write_sidecar(data_path: Path, config, extra: Optional[dict] = None) -> Path:
    from . import __version__

    payload = {
        "file": Path(data_path).name,
        "config": config.to_mapping(),
        "config_hash": config.digest(),
        "code_version": __version__,
        "conventions": CONVENTIONS,
    }
    if extra:
        payload.update(extra)
    return write_json(Path(str(data_path) + ".json"), payload)


_PLOT_TEMPLATES = {
    "web": """\
# Phase-plane web plot. Requires matplotlib (not a package dependency).
import csv, sys
import matplotlib.pyplot as plt

rows = list(csv.DictReader(open(sys.argv[1] if len(sys.argv) > 1 else "{data}")))
plt.figure(figsize=(5, 5))
plt.plot([float(r["u"]) for r in rows], [float(r["v"]) for r in rows], ",k")
plt.xlabel("u"); plt.ylabel("v"); plt.gca().set_aspect("equal")
plt.savefig("{stem}.png", dpi=200)
""",
    "butterfly": """\
# Scaled quasienergy spectra against hbar_s. Requires matplotlib.
import csv, sys
import matplotlib.pyplot as plt

rows = list(csv.DictReader(open(sys.argv[1] if len(sys.argv) > 1 else "{data}")))
x = [int(r["hbar_q"]) / int(r["hbar_p"]) for r in rows]
y = [float(r["E_scaled"]) for r in rows]
plt.figure(figsize=(6, 5))
plt.plot(x, y, ",k")
plt.xlabel("hbar_s"); plt.ylabel("scaled quasienergy")
plt.savefig("{stem}.png", dpi=200)
""",
    "evolve": """\
# Quantum and classical spread against s (log-log). Requires matplotlib.
import csv, sys
import matplotlib.pyplot as plt

rows = list(csv.DictReader(open(sys.argv[1] if len(sys.argv) > 1 else "{data}")))
s = [int(r["s"]) for r in rows if int(r["s"]) > 0]
q = [float(r["spread"]) for r in rows if int(r["s"]) > 0]
c = [float(r["classical"]) for r in rows if int(r["s"]) > 0]
plt.loglog(s, q, "-", lw=2, label="quantum")
plt.loglog(s, c, "-", lw=0.8, label="classical")
plt.xlabel("s"); plt.ylabel("spread"); plt.legend()
plt.savefig("{stem}.png", dpi=200)
""",
}


def write_plot_script(kind: str, data_path: Path) -> Path:
    data_path = Path(data_path)
    script = data_path.with_suffix(".plot.py")
    _atomic_write(script, _PLOT_TEMPLATES[kind].format(data=data_path.name, stem=data_path.stem))
    return script
