"""Effective-Hamiltonian quantities: eps, J, H0, H1, QAR and its vicinity."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import INTEGER_TOL, SystemParams, is_integer, is_swc
from .errors import ConditionViolated, OutOfRegime
from .surface import FourierSurface

# key of exp(-i g v_nbar) for nbar = 1..4 (v_1 = u, v_2 = -v, v_3 = -u, v_4 = v)
_ROTATED = {1: (-1, 0), 2: (0, 1), 3: (1, 0), 4: (0, -1)}


def epsilon(mu: float, hbar_s) -> float:
    """``eps = mu * sin(pi * hbar_s)``; exactly zero at integer hbar_s."""
    hs = float(hbar_s)
    if is_integer(hs):
        return 0.0
    return mu * math.sin(math.pi * hs)


def J(a: int, hbar_s) -> float:
    """``sin(a pi hbar_s) / sin(pi hbar_s)``, continued to integer hbar_s."""
    if a == 0:
        raise ValueError("J is defined for nonzero integers a")
    hs = float(hbar_s)
    if abs(hs - round(hs)) < INTEGER_TOL:
        m = round(hs)
        return float(a * (-1) ** (((a - 1) * m) % 2))
    return math.sin(a * math.pi * hs) / math.sin(math.pi * hs)


def h0_surface(params: SystemParams) -> FourierSurface:
    """Leading effective Hamiltonian, summed over one rotation period.

    The sum over the l' repetitions of the four rotated kicks is geometric
    and equals l' when l' divides k*n'*g, zero otherwise.
    """
    res = params.resonance
    pot = params.potential
    eta = params.eta_angle
    surf = FourierSurface()
    for g in range(-pot.N, pot.N + 1):
        if g == 0 or (res.k * res.n_prime * g) % res.l_prime != 0:
            continue
        base = pot.coefficient(g) * np.exp(1j * g * params.x_c) * res.l_prime
        for nbar, (ku, kv) in _ROTATED.items():
            surf.add((g * ku, g * kv), base * np.exp(-1j * g * nbar * eta))
    return surf.pruned(1e-14 * max(1.0, max(abs(c) for c in pot.coeffs)))


def h1_surface(params: SystemParams) -> FourierSurface:
    """First-order effective Hamiltonian under the SWC condition ``l' > N``.

    The first sum is x_c independent; the second sum only exists for
    ``l' <= 2N`` and carries the x_c dependence.
    """
    if not is_swc(params):
        raise ConditionViolated(
            f"H1 closed form needs l' > N (got l'={params.l_prime}, N={params.potential.N})")
    pot = params.potential
    lp = params.l_prime
    eta = params.eta_angle
    hs = params.hbar_s
    surf = FourierSurface()
    for g in range(1, pot.N + 1):
        amp = -2.0 * lp * J(g * g, hs) * abs(pot.coefficient(g)) ** 2 / math.cos(g * eta)
        surf.add_cos(g, g, amp)
        surf.add_cos(g, -g, amp)
    for g in range(lp - pot.N, pot.N + 1):
        b = (np.exp(1j * lp * params.x_c) * J(g * (lp - g), hs)
             * pot.coefficient(g) * pot.coefficient(lp - g) / math.sin(2 * g * eta))
        surf.add_cos(lp - g, g, -4.0 * lp * (b * np.exp(-1j * g * eta)).imag, lp * eta)
        surf.add_cos(lp - g, -g, 4.0 * lp * (b * np.exp(1j * g * eta)).imag, lp * eta)
    return surf.pruned(0.0)


def qar_predicate(params: SystemParams) -> bool:
    """Quantum antiresonance: integer hbar_s together with ``l' > N``."""
    return is_integer(float(params.hbar_s)) and is_swc(params)


@dataclass(frozen=True)
class NearQarScaling:
    kappa_prime: float
    hbar_prime: float
    delta: float
    hbar_s0: int
    mu: float

    def identity_residual(self) -> float:
        """``(kappa')**2/hbar' - mu*kappa'``, zero up to rounding."""
        return self.kappa_prime ** 2 / self.hbar_prime - self.mu * self.kappa_prime


def near_qar_scaling(mu: float, hbar_s) -> NearQarScaling:
    """Effective SWC parameters for hbar_s just below an integer."""
    hs = float(hbar_s)
    hs0 = max(1, round(hs))
    delta = hs0 - hs
    if not 0.0 < delta < 0.5:
        raise OutOfRegime(f"hbar_s={hs} is not within 1/2 below an integer >= 1")
    kappa = 2.0 * math.pi * hs * mu
    hbar = 2.0 * math.pi * hs
    denom = 2.0 * (hs0 - delta)
    return NearQarScaling(kappa * delta / denom, hbar * delta / denom, delta, hs0, mu)
