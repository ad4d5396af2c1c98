"""Ballistic spreading at eta/(2 pi) = 1/4 and 1/8 with x_c = 0.3 pi/2."""
import argparse
import math
from pathlib import Path

import numpy as np

from kickedhall.evolution import growth_exponent
from kickedhall.persist import write_csv, write_json

from _common import golden_params, run_packet

CASES = {"1/4": (8000, (2000, 8000)), "1/8": (60000, (30000, 60000))}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("out/ballistic"))
    args = ap.parse_args()
    summary = {}
    for eta, (s_max, window) in CASES.items():
        p = golden_params(eta, 0.3 * math.pi / 2)
        center, res = run_packet(p, s_max, n_beta=64, target=(0.0, 0.0), record_every=200)
        write_csv(args.out / f"eta{eta.replace('/', '_')}.csv", ["s", "spread", "spread_u", "spread_v"],
                  zip(res.times, res.spread.values, res.spread_u, res.spread_v))
        sel = (res.times >= window[0]) & (res.times <= window[1])
        summary[eta] = {"center": [center.point.u, center.point.v], "kind": center.kind,
                        "window": list(window),
                        "exponent": growth_exponent(res.times, res.spread.values, window),
                        "spread_over_s2": float(np.mean(res.spread.values[sel] / res.times[sel] ** 2))}
        print(eta, summary[eta])
    write_json(args.out / "summary.json", summary)


if __name__ == "__main__":
    main()
