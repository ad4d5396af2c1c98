"""Quasienergy band spectra for rational hbar_s = q/p.

In the kq representation the r-period propagator (conjugated by the first
kick) is the ordered product

    M_r(w) = M^(0)(w) M^(1)(w) ... M^(r/2-1)(w)

of p x p "kicked Harper" matrices, leftmost factor j = 0.  Each factor is

    M^(j)_{d,d'} = (1/p) sum_s exp[-i mu W1(w1 + 2 pi hbar_s d')
                                   - i mu W2(w2 + 2 pi s/p)
                                   - i (w2 + 2 pi s/p)(d' - d)]

with W2(x) = V(x_c - 2j eta - (-1)^j x) and W1(x) = V(x_c - (2j+1) eta - (-1)^j x).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import Potential, SystemParams
from .effective import epsilon
from .errors import EigenFailure, ExtremumMismatch, TruncationTooSmall

TWO_PI = 2.0 * math.pi
UNITARITY_TOL = 1e-11
RESIDUAL_TOL = 1e-10


def kick_fourier_coeffs(potential: Potential, x: float, mu: float, l_max: int,
                        check: bool = True) -> np.ndarray:
    """Fourier coefficients of ``exp(-i mu V(x + u))`` for l = -l_max..l_max.

    Returned array index ``l + l_max``.  Raises TruncationTooSmall when the
    outermost coefficients exceed 1e-15.
    """
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    m = 8 * max(l_max, 64)
    u = TWO_PI * np.arange(m) / m
    c = np.fft.fft(np.exp(-1j * mu * potential.value(x + u))) / m
    idx = np.arange(-l_max, l_max + 1)
    out = c[idx % m]
    if check and max(abs(out[0]), abs(out[-1])) > 1e-15:
        raise TruncationTooSmall(f"|J_(+-{l_max})| = {max(abs(out[0]), abs(out[-1])):.2e}")
    return out


def certified_truncation(potential: Potential, mu: float, tol: float = 1e-16,
                         n_x: int = 16, l_cap: int = 512) -> int:
    """Smallest l_max whose tail beyond it stays below ``tol`` for all x."""
    if mu == 0.0:
        return 1
    l_max = 8
    while l_max <= l_cap:
        worst = 0
        for x in TWO_PI * np.arange(n_x) / n_x:
            c = np.abs(kick_fourier_coeffs(potential, x, mu, 4 * l_max, check=False))
            n = np.arange(-4 * l_max, 4 * l_max + 1)
            big = np.abs(n[c >= tol])
            worst = max(worst, int(big.max()) if big.size else 0)
        if worst < l_max:
            return max(worst + 1, 1)
        l_max *= 2
    raise TruncationTooSmall(f"kick coefficients do not decay within {l_cap} harmonics")


def _w_functions(params: SystemParams, j: int):
    pot = params.potential
    eta = params.eta_angle
    sign = -1.0 if j % 2 else 1.0
    x2 = params.x_c - 2 * j * eta
    x1 = params.x_c - (2 * j + 1) * eta
    return (lambda x: pot.value(x1 - sign * x)), (lambda x: pot.value(x2 - sign * x))


def mkh_matrix(j: int, w1, w2, params: SystemParams) -> np.ndarray:
    """Kicked-Harper factor j at Bloch vector(s) w; shape (..., p, p)."""
    hs = params.hbar_fraction
    p = hs.denominator
    w1 = np.asarray(w1, dtype=float)
    w2 = np.asarray(w2, dtype=float)
    if params.mu == 0.0:
        return np.broadcast_to(np.eye(p, dtype=complex), np.broadcast(w1, w2).shape + (p, p)).copy()
    w_1, w_2 = _w_functions(params, j)
    d = np.arange(p)
    b = w2[..., None] + TWO_PI * d / p                    # (..., s)
    a = w1[..., None] + TWO_PI * float(hs) * d            # (..., d')
    four = np.exp(1j * b[..., None, :] * d[:, None])      # (..., d, s)
    mid = four * np.exp(-1j * params.mu * w_2(b))[..., None, :]
    m = mid @ np.conj(np.swapaxes(four, -1, -2)) / p
    return m * np.exp(-1j * params.mu * w_1(a))[..., None, :]


def mr_matrix(w1, w2, params: SystemParams) -> np.ndarray:
    """Ordered product over the r/2 factors, j = 0 leftmost."""
    out = None
    for j in range(params.r // 2):
        m = mkh_matrix(j, w1, w2, params)
        out = m if out is None else out @ m
    return out


def unitarity_error(m: np.ndarray) -> float:
    p = m.shape[-1]
    eye = np.eye(p)
    return float(np.max(np.abs(np.conj(np.swapaxes(m, -1, -2)) @ m - eye)))


def eigenphases(m: np.ndarray, w=None) -> np.ndarray:
    """Sorted quasienergies E in (-pi, pi] with eigenvalues exp(-iE).

    Every eigenpair is certified by ``|M x - lambda x| < 1e-10``.
    """
    lam, vec = np.linalg.eig(m)
    resid = np.linalg.norm(m @ vec - vec * lam[..., None, :], axis=-2)
    if np.any(resid > RESIDUAL_TOL):
        raise EigenFailure(f"eigen residual {resid.max():.2e} exceeds {RESIDUAL_TOL}",
                           None if w is None else w)
    e = -np.angle(lam)
    e = np.where(e <= -math.pi, e + TWO_PI, e)
    return np.sort(e, axis=-1)


@dataclass(frozen=True)
class BlochPoint:
    w1: float
    w2: float


def brillouin_grid(hbar_s: Fraction, n1: int, n2: int) -> Tuple[np.ndarray, np.ndarray]:
    """Uniform (cell-centred) grid on 0 <= w1 < 2 pi q/p, 0 <= w2 < 2 pi/p."""
    q, p = hbar_s.numerator, hbar_s.denominator
    w1 = TWO_PI * q / p * (np.arange(n1) + 0.5) / n1
    w2 = TWO_PI / p * (np.arange(n2) + 0.5) / n2
    g1, g2 = np.meshgrid(w1, w2, indexing="ij")
    return g1.ravel(), g2.ravel()


@dataclass
class BandSpectrum:
    hbar_s: Fraction
    w1: np.ndarray
    w2: np.ndarray
    eigenphases: np.ndarray            # (n_grid, p)

    @property
    def grid(self) -> List[BlochPoint]:
        return [BlochPoint(a, b) for a, b in zip(self.w1, self.w2)]

    def multiplicities(self, tol: float = 1e-9) -> np.ndarray:
        """Largest eigenphase multiplicity at each grid point."""
        e = self.eigenphases
        if e.shape[1] < 2:
            return np.ones(len(e), dtype=int)
        same = np.diff(e, axis=1) < tol
        return 1 + np.max(np.cumsum(same, axis=1), axis=1)


def band_spectrum(params: SystemParams, grid_dims=(16, 16), w1=None, w2=None) -> BandSpectrum:
    hs = params.hbar_fraction
    if w1 is None:
        w1, w2 = brillouin_grid(hs, *grid_dims)
    m = mr_matrix(w1, w2, params)
    return BandSpectrum(hs, np.asarray(w1), np.asarray(w2), eigenphases(m))


def scaled_qe(e: np.ndarray, params: SystemParams) -> np.ndarray:
    """``8 cos(eta) E / (r mu eps)`` with eps at the exact hbar_s."""
    eps = epsilon(params.mu, params.hbar_s)
    return 8.0 * math.cos(params.eta_angle) * e / (params.r * params.mu * eps)


# ---------------------------------------------------------------- hbar_s = 1/2

SYMMETRY_CENTERS = ((0.0, 0.0), (math.pi / 2, 0.0), (0.0, math.pi / 2), (math.pi / 2, math.pi / 2))
TRANSLATIONS = ((0.0, 0.0), (math.pi, 0.0), (0.0, math.pi), (math.pi, math.pi))


def qe_splitting(params: SystemParams, w1, w2) -> np.ndarray:
    """``|E_1 - E_2|`` for the two bands at hbar_s = 1/2."""
    if params.hbar_fraction != Fraction(1, 2):
        raise ValueError("the two-band splitting needs hbar_s = 1/2")
    e = eigenphases(mr_matrix(w1, w2, params))
    return np.abs(e[..., 1] - e[..., 0])


@dataclass
class WidthGap:
    width: float
    gap: float
    width_scaled: float
    gap_scaled: float
    extrema: dict = field(default_factory=dict)


def width_gap_half(params: SystemParams, scan: int = 64, tol: float = 1e-12) -> WidthGap:
    """Spectrum width (splitting at (pi/2, pi/2)) and gap (splitting at (0, 0)).

    A ``scan`` x ``scan`` grid over the zone must not find values outside
    [gap, width]; otherwise ExtremumMismatch is raised.
    """
    centres = {c: float(qe_splitting(params, *c)) for c in SYMMETRY_CENTERS}
    width = centres[(math.pi / 2, math.pi / 2)]
    gap = centres[(0.0, 0.0)]
    g = math.pi * np.arange(scan) / scan
    g1, g2 = np.meshgrid(g, g, indexing="ij")
    vals = qe_splitting(params, g1.ravel(), g2.ravel())
    lo, hi = float(vals.min()), float(vals.max())
    if lo < gap - tol or hi > width + tol:
        raise ExtremumMismatch(f"grid scan [{lo}, {hi}] outside [{gap}, {width}]")
    scale = 2.0 * abs(math.cos(params.eta_angle)) / (params.l_prime * params.mu ** 2)
    extrema = {"min_at": [0.0, 0.0], "max_at": [math.pi / 2, math.pi / 2],
               "saddles": {f"{a:.6f},{b:.6f}": centres[(a, b)] for a, b in SYMMETRY_CENTERS[1:3]},
               "scan_min": lo, "scan_max": hi}
    return WidthGap(width, gap, width * scale, gap * scale, extrema)


def trace_symmetry_check(params: SystemParams, n_random: int = 100,
                         rng: Optional[np.random.Generator] = None) -> float:
    """Largest ``|Tr M_r(w_t - w) - Tr M_r(w)|`` over random w and the four w_t."""
    rng = np.random.default_rng(0) if rng is None else rng
    w1 = rng.uniform(0, math.pi, n_random)
    w2 = rng.uniform(0, math.pi, n_random)
    ref = np.trace(mr_matrix(w1, w2, params), axis1=-2, axis2=-1)
    worst = 0.0
    for t1, t2 in TRANSLATIONS:
        tr = np.trace(mr_matrix(t1 - w1, t2 - w2, params), axis1=-2, axis2=-1)
        worst = max(worst, float(np.max(np.abs(tr - ref))))
    return worst
