"""Butterfly sweeps over rational hbar_s with an on-disk memo cache."""
from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import Potential, SystemParams, fraction_str
from .harper import harper_spectrum, one_sided_hausdorff
from .spectrum import band_spectrum, scaled_qe

log = logging.getLogger(__name__)

CACHE_VERSION = 1


def farey(p_max: int, p_min: int = 2) -> List[Fraction]:
    """Coprime q/p with p_min <= p <= p_max and 0 < q < p, ordered by p then q."""
    return [Fraction(q, p) for p in range(p_min, p_max + 1)
            for q in range(1, p) if math.gcd(q, p) == 1]


@dataclass
class SpectrumSlice:
    hbar_s: Fraction
    w1: np.ndarray
    w2: np.ndarray
    energies: np.ndarray      # (n_grid, p)
    scaled: np.ndarray        # same shape


@dataclass
class ButterflyDataset:
    mu: float
    eta: Fraction
    x_c: float
    slices: List[SpectrumSlice]

    def rows(self):
        """(q, p, band, w1, w2, E, E_scaled) ordered by p, q, grid index, band."""
        for sl in sorted(self.slices, key=lambda s: (s.hbar_s.denominator, s.hbar_s.numerator)):
            q, p = sl.hbar_s.numerator, sl.hbar_s.denominator
            for i in range(len(sl.w1)):
                for b in range(sl.energies.shape[1]):
                    yield q, p, b, sl.w1[i], sl.w2[i], sl.energies[i, b], sl.scaled[i, b]

    def by_hbar(self) -> Dict[Fraction, np.ndarray]:
        return {sl.hbar_s: sl.scaled.ravel() for sl in self.slices}

    def scaled_range(self) -> Tuple[float, float]:
        allv = np.concatenate([sl.scaled.ravel() for sl in self.slices])
        return float(allv.min()), float(allv.max())


class SpectrumCache:
    """Content-addressed store of per-hbar_s spectra (``.npz`` files)."""

    def __init__(self, root: Optional[os.PathLike] = None):
        self.root = Path(root) if root is not None else None

    def key(self, params: SystemParams, grid_dims) -> str:
        blob = json.dumps({"v": CACHE_VERSION, "params": params.to_dict(),
                           "grid": list(grid_dims)}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:32]

    def load(self, key: str) -> Optional[dict]:
        if self.root is None:
            return None
        path = self.root / f"{key}.npz"
        if not path.exists():
            return None
        with np.load(path) as data:
            return {k: data[k] for k in data.files}

    def store(self, key: str, **arrays) -> None:
        if self.root is None:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "wb") as fh:
            np.savez(fh, **arrays)
        os.replace(tmp, self.root / f"{key}.npz")

    def clear(self) -> int:
        if self.root is None or not self.root.exists():
            return 0
        n = 0
        for path in self.root.glob("*.npz"):
            path.unlink()
            n += 1
        return n


def _slice_task(args) -> SpectrumSlice:
    params_dict, grid_dims, cache_root = args
    params = SystemParams.from_dict(params_dict)
    cache = SpectrumCache(cache_root)
    key = cache.key(params, grid_dims)
    hit = cache.load(key)
    if hit is not None:
        w1, w2, e = hit["w1"], hit["w2"], hit["energies"]
    else:
        bs = band_spectrum(params, grid_dims)
        w1, w2, e = bs.w1, bs.w2, bs.eigenphases
        cache.store(key, w1=w1, w2=w2, energies=e)
    return SpectrumSlice(params.hbar_fraction, w1, w2, e, scaled_qe(e, params))


def butterfly(mu: float, eta, x_c: float, p_max: int, grid_dims=(16, 16),
              potential: Optional[Potential] = None, workers: int = 1,
              cache_dir: Optional[os.PathLike] = None,
              hbars: Optional[Sequence[Fraction]] = None) -> ButterflyDataset:
    """Scaled quasienergies for every coprime q/p with p <= p_max."""
    if p_max < 2:
        raise ValueError("p_max must be >= 2")
    potential = Potential.cosine() if potential is None else potential
    hbars = farey(p_max) if hbars is None else list(hbars)
    tasks = [(SystemParams(potential, Fraction(eta), x_c, hs, mu).to_dict(),
              tuple(grid_dims), None if cache_dir is None else str(cache_dir)) for hs in hbars]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            slices = list(pool.map(_slice_task, tasks))
    else:
        slices = [_slice_task(t) for t in tasks]
    return ButterflyDataset(mu, Fraction(eta), x_c, slices)


def partner(hbar_s: Fraction) -> Fraction:
    return (Fraction(hbar_s) + Fraction(1, 2)) % 1


def doubling_metric(mu: float, eta, x_c: float = 0.0, p_max: int = 12, grid_dims=(16, 16),
                    potential: Optional[Potential] = None, workers: int = 1,
                    cache_dir: Optional[os.PathLike] = None) -> float:
    """Mean one-sided Hausdorff distance from the spectrum at hbar_s to that at hbar_s + 1/2.

    hbar_s runs over coprime q/p with p <= p_max, skipping 1/2 whose partner is
    the integer point where the scaling is undefined.
    """
    base = [h for h in farey(p_max) if partner(h) != 0]
    needed = sorted(set(base) | {partner(h) for h in base}, key=lambda f: (f.denominator, f.numerator))
    data = butterfly(mu, eta, x_c, p_max, grid_dims, potential, workers, cache_dir, needed).by_hbar()
    return float(np.mean([one_sided_hausdorff(data[h], data[partner(h)]) for h in base]))


def harper_distance(mu: float, eta, x_c: float = 0.0, p_max: int = 12, grid_dims=(16, 16),
                    n_k: int = 96, workers: int = 1,
                    cache_dir: Optional[os.PathLike] = None) -> Dict[str, float]:
    """Largest distance from the exact scaled spectra to the Harper spectra at 2 hbar_s."""
    data = butterfly(mu, eta, x_c, p_max, grid_dims, None, workers, cache_dir).by_hbar()
    out = {}
    for hs, e in data.items():
        twice = (2 * hs) % 1 or Fraction(1)
        out[fraction_str(hs)] = one_sided_hausdorff(e, harper_spectrum(twice, n_k))
    return out
