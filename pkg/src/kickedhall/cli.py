"""Command-line entry point: ``kickedhall <subcommand> [--config PATH] ...``."""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import classical, effective, evolution, spectrum, sweep
from .classical import PhasePoint
from .config import dump_config, load_config
from .errors import ConfigError, KickedHallError, NumericalError
from .persist import write_csv, write_json, write_plot_script, write_sidecar

log = logging.getLogger("kickedhall")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def run_web(cfg, out: Path) -> dict:
    params = cfg.params()
    pts = classical.sample_web(params, PhasePoint(*cfg.start), cfg.n_steps, unfolded=cfg.unfolded)[1:]
    path = write_csv(out / "web.csv", ["u", "v"], pts)
    span = (np.ptp(pts[:, 0]) / (2 * math.pi), np.ptp(pts[:, 1]) / (2 * math.pi)) if len(pts) else (0, 0)
    write_sidecar(path, cfg, {"cells_spanned": [float(s) for s in span]})
    write_plot_script("web", path)
    return {"points": len(pts), "csv": str(path)}


def run_butterfly(cfg, out: Path) -> dict:
    data = sweep.butterfly(cfg.mu, cfg.eta, cfg.x_c, cfg.p_max, tuple(cfg.grid), cfg.potential,
                           cfg.workers, cfg.cache_dir)
    path = write_csv(out / "butterfly.csv", ["hbar_q", "hbar_p", "band", "w1", "w2", "E", "E_scaled"],
                     data.rows())
    lo, hi = data.scaled_range()
    write_sidecar(path, cfg, {"scaled_range": [lo, hi], "n_hbar": len(data.slices)})
    write_plot_script("butterfly", path)
    return {"scaled_range": [lo, hi], "csv": str(path)}


def run_evolve(cfg, out: Path) -> dict:
    params = cfg.params()
    center = classical.select_center(classical.find_fixed_points(params), tuple(cfg.center_target))
    fibers = evolution.init_coherent_fibers(center, params, cfg.n_beta, cfg.window_half)
    s_max = params.r * math.ceil(cfg.s_max / params.r)
    res = evolution.evolve(fibers, params, s_max, cfg.record_every, center=center)
    cl = classical.classical_spread(params, center, cfg.classical_samples, s_max, seed=cfg.seed,
                                    reference="center")
    cl_map = dict(zip(cl.times.tolist(), cl.values.tolist()))
    rows = ((s, t, q, f, su, sv, cl_map[s]) for s, t, q, f, su, sv in
            zip(res.times, res.tau, res.spread.values, res.fidelity[:, 1], res.spread_u, res.spread_v))
    path = write_csv(out / "evolve.csv",
                     ["s", "tau", "spread", "fidelity", "spread_u", "spread_v", "classical"], rows)
    meta = dict(res.metadata)
    meta["fixed_point"] = {"u": center.point.u, "v": center.point.v,
                           "trace": center.residue_trace, "kind": center.kind}
    meta["seed"] = cfg.seed
    write_sidecar(path, cfg, {"run": meta})
    write_plot_script("evolve", path)
    return {"final_spread": float(res.spread.values[-1]), "csv": str(path)}


def run_widthgap(cfg, out: Path) -> dict:
    params = cfg.params()
    wg = spectrum.width_gap_half(params, scan=cfg.scan)
    report = {"eta": str(cfg.eta), "mu": cfg.mu, "xc": cfg.x_c, "width": wg.width, "gap": wg.gap,
              "width_scaled": wg.width_scaled, "gap_scaled": wg.gap_scaled, "extrema": wg.extrema}
    write_json(out / "widthgap.json", report)
    print(f"width={wg.width:.7g} gap={wg.gap:.7g} "
          f"width_scaled={wg.width_scaled:.7g} gap_scaled={wg.gap_scaled:.7g}")
    return report


def run_qar_check(cfg, out: Path) -> dict:
    params = cfg.params()
    rng = np.random.default_rng(cfg.seed)
    hs = params.hbar_fraction
    w1 = rng.uniform(0, 2 * math.pi * hs.numerator / hs.denominator, cfg.n_random)
    w2 = rng.uniform(0, 2 * math.pi / hs.denominator, cfg.n_random)
    e = spectrum.band_spectrum(params, w1=w1, w2=w2).eigenphases
    band_spread = float(np.max(np.abs(np.exp(1j * e) - np.exp(1j * e[0]))))
    pts = classical.default_seeds(4)
    center = pts[int(rng.integers(len(pts)))]
    res = evolution.evolve(evolution.init_coherent_fibers(center, params, 8), params,
                           cfg.cycles * params.r, center=center)
    fid_err = float(np.max(np.abs(res.fidelity[:, 1] - 1.0)))
    report = {"qar_predicate": effective.qar_predicate(params),
              "band_spread": band_spread, "fidelity_error": fid_err,
              "flat_band": band_spread < cfg.tol, "fidelity_one": fid_err < cfg.tol}
    write_json(out / "qar_check.json", report)
    print(f"flat_band={report['flat_band']} fidelity_one={report['fidelity_one']}")
    if not (report["flat_band"] and report["fidelity_one"]):
        raise NumericalError("antiresonance check failed")
    return report


def run_scaling(cfg, out: Path) -> dict:
    params = cfg.params()
    grid = -math.pi + 2 * math.pi * (np.arange(cfg.n_points) + 0.5) / cfg.n_points
    pts = [PhasePoint(a, b) for a in grid for b in grid]
    slope = classical.displacement_scaling(params, cfg.kappas, pts)
    report = {"eta": str(cfg.eta), "l_prime": params.l_prime, "swc": params.l_prime > params.potential.N,
              "slope": slope}
    write_json(out / "scaling.json", report)
    print(f"slope={slope:.4f}")
    return report


RUNNERS = {
    "web": run_web,
    "butterfly": run_butterfly,
    "evolve": run_evolve,
    "widthgap": run_widthgap,
    "qar-check": run_qar_check,
    "scaling": run_scaling,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kickedhall", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path)
        p.add_argument("--out", type=Path, default=Path("out"))
        p.add_argument("--workers", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--print-config", action="store_true",
                       help="print the resolved config and exit")
    c = sub.add_parser("cache")
    c.add_argument("action", choices=["clear", "info"])
    c.add_argument("--dir", type=Path, required=True)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "cache":
            cache = sweep.SpectrumCache(args.dir)
            if args.action == "clear":
                print(f"removed {cache.clear()} entries")
            else:
                n = len(list(args.dir.glob("*.npz"))) if args.dir.exists() else 0
                print(f"{n} entries in {args.dir}")
            return EXIT_OK
        cfg = load_config(args.command, args.config, {"workers": args.workers, "seed": args.seed})
        if args.print_config:
            print(dump_config(cfg), end="")
            return EXIT_OK
        RUNNERS[args.command](cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except KickedHallError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
