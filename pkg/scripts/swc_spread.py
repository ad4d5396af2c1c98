"""Superweak-chaos packet spreading: quantum vs classical, x_c dependence, tau collapse.

Writes one CSV per eta plus a JSON summary. Defaults reproduce the
acceptance setup (mu = 0.1, golden hbar_s, s up to 20000).
"""
import argparse
import math
from pathlib import Path
from types import SimpleNamespace

import numpy as np

from kickedhall.classical import classical_spread
from kickedhall.evolution import growth_rate, universality_collapse
from kickedhall.persist import write_csv, write_json

from _common import golden_params, run_packet


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--s-max", type=int, default=20000)
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--out", type=Path, default=Path("out/swc_spread"))
    args = ap.parse_args()

    summary, quantum, classical = {}, [], []
    for eta, x_c in (("2/3", 0.0), ("2/3", math.pi / 2), ("3/5", 0.0), ("8/13", 0.0)):
        p = golden_params(eta, x_c)
        center, res = run_packet(p, args.s_max, record_every=120)
        cl = classical_spread(p, center, args.samples, int(res.times[-1]), reference="center")
        gauss = _gaussian_spread(p, center, args.samples, int(res.times[-1]))
        cl_at = dict(zip(cl.times.tolist(), cl.values.tolist()))
        g_at = dict(zip(gauss[0].tolist(), gauss[1].tolist()))
        rows = [(s, t, q, su, sv, cl_at[s], g_at[s]) for s, t, q, su, sv in
                zip(res.times, res.tau, res.spread.values, res.spread_u, res.spread_v)]
        name = f"eta{eta.replace('/', '_')}_xc{x_c:.3f}"
        write_csv(args.out / f"{name}.csv",
                  ["s", "tau", "quantum", "quantum_u", "quantum_v", "classical_disk", "classical_gauss"], rows)
        summary[name] = {"center": [center.point.u, center.point.v], "trace": center.residue_trace,
                         "rate_500_2000": growth_rate(res.times, res.spread.values, (500, 2000))}
        if x_c == 0.0:
            quantum.append(res)
            classical.append(SimpleNamespace(tau=cl.times / (8 * abs(math.cos(p.eta_angle))),
                                             spread=cl, metadata=res.metadata))

    weak = golden_params("0/1")
    _, wres = run_packet(weak, min(args.s_max, 8000), n_beta=64, target=(0.0, 0.0))
    summary["eta0_rate_500_2000"] = growth_rate(wres.times, wres.spread.values, (500, 2000))
    summary["collapse_quantum"] = universality_collapse(quantum)
    summary["collapse_classical"] = universality_collapse(classical)
    write_json(args.out / "summary.json", summary)
    for k, v in summary.items():
        print(k, v)


def _gaussian_spread(p, center, n, s_max, seed=0):
    """Diagnostic ensemble: Gaussian of variance hbar/2 per coordinate (the Husimi-matched cloud)."""
    from kickedhall.classical import basic_map_arrays

    rng = np.random.default_rng(seed)
    sd = math.sqrt(p.hbar / 2)
    u = center.point.u + sd * rng.standard_normal(n)
    v = center.point.v + sd * rng.standard_normal(n)
    times = np.arange(0, s_max + 1, p.r)
    vals = np.empty(len(times))
    vals[0] = np.mean((u - center.point.u) ** 2 + (v - center.point.v) ** 2)
    for i in range(1, len(times)):
        u, v = basic_map_arrays(u, v, p)
        vals[i] = np.mean((u - center.point.u) ** 2 + (v - center.point.v) ** 2)
    return times, vals


if __name__ == "__main__":
    main()
