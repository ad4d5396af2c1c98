"""Brute-force commutator algebra of phase-space exponentials.

Elements are finite sums ``sum c * exp(i(a*u + b*v))`` with ``[u, v] = i*hbar``.
Two exponentials satisfy

    [e^{i(a1 u + b1 v)}, e^{i(a2 u + b2 v)}]
        = -2i sin((a1*b2 - b1*a2) * pi * hbar_s) e^{i((a1+a2) u + (b1+b2) v)}

so the whole algebra reduces to integer bookkeeping.  This module is kept
independent of the closed-form H1 in :mod:`kickedhall.effective`; the two are
compared in the test suite.
"""
from __future__ import annotations

import math
from collections import defaultdict

import numpy as np

from .core import SystemParams
from .surface import FourierSurface

# exp(-i g v_j) with v_1 = u, v_2 = -v, v_3 = -u, v_4 = v (period 4 in j)
_ROTATED_KEY = {
    1: lambda g: (-g, 0),
    2: lambda g: (0, g),
    3: lambda g: (g, 0),
    0: lambda g: (0, -g),
}


def commutator(x: dict, y: dict, hbar_s: float) -> dict:
    out = defaultdict(complex)
    for (a1, b1), c1 in x.items():
        for (a2, b2), c2 in y.items():
            s = math.sin((a1 * b2 - b1 * a2) * math.pi * hbar_s)
            if s == 0.0:
                continue
            out[(a1 + a2, b1 + b2)] += -2j * s * c1 * c2
    return dict(out)


def rotated_kick(params: SystemParams, j: int) -> dict:
    """``V(x_c - j eta - v_j)`` expanded in exponentials."""
    pot = params.potential
    eta = params.eta_angle
    out = {}
    for g in range(-pot.N, pot.N + 1):
        if g == 0:
            continue
        key = _ROTATED_KEY[j % 4](g)
        out[key] = pot.coefficient(g) * np.exp(1j * g * (params.x_c - j * eta))
    return out


def kick_exponent(params: SystemParams, j: int) -> dict:
    """``O_j = -i mu V(x_c - j eta - v_j)``."""
    return {k: -1j * params.mu * c for k, c in rotated_kick(params, j).items()}


def h1_by_commutators(params: SystemParams) -> FourierSurface:
    """``H1 = -(1/(2i mu eps)) sum_{j<j'} [O_j, O_j']`` summed term by term."""
    hs = float(params.hbar_s)
    eps = params.mu * math.sin(math.pi * hs)
    ops = [kick_exponent(params, j) for j in range(1, params.r + 1)]
    acc = defaultdict(complex)
    for a in range(len(ops)):
        for b in range(a + 1, len(ops)):
            for key, c in commutator(ops[a], ops[b], hs).items():
                acc[key] += c
    scale = -1.0 / (2j * params.mu * eps)
    return FourierSurface({k: v * scale for k, v in acc.items()})


def h0_by_sum(params: SystemParams) -> FourierSurface:
    """Plain sum of the r rotated kicks, ``sum_j V(x_c - j eta - v_j)``."""
    acc = defaultdict(complex)
    for j in range(1, params.r + 1):
        for key, c in rotated_kick(params, j).items():
            acc[key] += c
    return FourierSurface(dict(acc))
