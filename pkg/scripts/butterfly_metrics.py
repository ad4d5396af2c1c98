"""Doubled-butterfly and Harper distances over p <= p_max."""
import argparse
from pathlib import Path

from kickedhall.persist import write_json
from kickedhall.sweep import doubling_metric, harper_distance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-max", type=int, default=12)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--cache", type=Path, default=Path(".cache/spectra"))
    ap.add_argument("--out", type=Path, default=Path("out/butterfly"))
    args = ap.parse_args()
    summary = {}
    for mu in (0.05, 0.1):
        dist = harper_distance(mu, "2/3", 0.0, args.p_max, workers=args.workers, cache_dir=args.cache)
        summary[str(mu)] = {
            "doubling": doubling_metric(mu, "2/3", 0.0, args.p_max, workers=args.workers, cache_dir=args.cache),
            "harper_max": max(dist.values()),
            "harper": dist,
        }
        print(mu, summary[str(mu)]["doubling"], summary[str(mu)]["harper_max"])
    write_json(args.out / "summary.json", summary)


if __name__ == "__main__":
    main()
