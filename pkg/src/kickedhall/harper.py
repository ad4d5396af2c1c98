"""Harper model ``-(cos u + cos v)`` with ``[u, v] = 2 pi i hbar_s``.

Used as an independent oracle for the scaled quasienergy spectra: for
cosine kicks under strong superweak chaos the exact scaled spectrum at
hbar_s approaches the Harper spectrum at twice that Planck constant.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

TWO_PI = 2.0 * math.pi


def harper_matrix(hbar_s: Fraction, k1, k2) -> np.ndarray:
    """b x b Bloch matrix of the Harper operator at hbar_s = a/b; batched over k."""
    hbar_s = Fraction(hbar_s)
    a, b = hbar_s.numerator, hbar_s.denominator
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    n = np.arange(b)
    diag = -np.cos(k1[..., None] + TWO_PI * a * n / b)
    shift = np.zeros(k2.shape + (b, b), dtype=complex)
    for i in range(b - 1):
        shift[..., i, i + 1] = 1.0
    shift[..., b - 1, 0] += np.exp(1j * k2)
    h = -0.5 * (shift + np.conj(np.swapaxes(shift, -1, -2)))
    idx = np.arange(b)
    h[..., idx, idx] += diag
    return h


def harper_spectrum(hbar_s: Fraction, n_k: int = 32) -> np.ndarray:
    """All band energies on an ``n_k x n_k`` grid over the magnetic zone, sorted."""
    b = Fraction(hbar_s).denominator
    k1 = TWO_PI / b * np.arange(n_k) / n_k
    k2 = TWO_PI * np.arange(n_k) / n_k
    g1, g2 = np.meshgrid(k1, k2, indexing="ij")
    return np.sort(np.linalg.eigvalsh(harper_matrix(hbar_s, g1.ravel(), g2.ravel())).ravel())


def one_sided_hausdorff(a, b) -> float:
    """``max_{x in a} min_{y in b} |x - y|`` for 1-D point sets."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.sort(np.asarray(b, dtype=float).ravel())
    if a.size == 0 or b.size == 0:
        raise ValueError("empty point set")
    i = np.clip(np.searchsorted(b, a), 1, b.size - 1)
    d = np.minimum(np.abs(a - b[i - 1]), np.abs(a - b[i]))
    if b.size == 1:
        d = np.abs(a - b[0])
    return float(d.max())


def hausdorff(a, b) -> float:
    return max(one_sided_hausdorff(a, b), one_sided_hausdorff(b, a))
