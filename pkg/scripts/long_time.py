"""Late-time growth exponents of the SWC spread out to 1e5 kicks."""
import argparse
from pathlib import Path

from kickedhall.evolution import growth_exponent
from kickedhall.persist import write_csv, write_json

from _common import golden_params, run_packet


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s-max", type=int, default=100000)
    ap.add_argument("--out", type=Path, default=Path("out/long"))
    args = ap.parse_args()
    summary = {}
    for eta in ("2/3", "3/5", "8/13"):
        p = golden_params(eta)
        _, res = run_packet(p, args.s_max, record_every=1000)
        write_csv(args.out / f"eta{eta.replace('/', '_')}.csv", ["s", "tau", "spread", "spread_u", "spread_v"],
                  zip(res.times, res.tau, res.spread.values, res.spread_u, res.spread_v))
        summary[eta] = {"exponent": growth_exponent(res.times, res.spread.values, (args.s_max // 10, args.s_max)),
                        "u_over_v": float(res.spread_u[-1] / res.spread_v[-1])}
        print(eta, summary[eta])
    write_json(args.out / "summary.json", summary)


if __name__ == "__main__":
    main()
