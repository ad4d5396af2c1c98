"""Model parameters, resonance arithmetic and the kick potential.

Units are scaled so that the cyclotron frequency is 1 and the potential is
2*pi-periodic.  The rotation angle per period is fixed at pi/2 (n = 4) and the
Hall drift per period is ``eta = 2*pi*k/l``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .errors import ConfigError

#: rotation order: gamma = 2*pi/N_ROT
N_ROT = 4
INTEGER_TOL = 1e-12

HbarS = Union[Fraction, float]


def as_fraction(value) -> Fraction:
    """Parse ``"k/l"`` strings, ints or Fractions into a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"not a fraction: {value!r}") from exc
    raise ConfigError(f"expected an exact fraction, got {value!r}")


def fraction_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class Potential:
    """Finite Fourier series ``V(x) = sum_{0<|g|<=N} V_g exp(igx)``.

    Only ``V_1..V_N`` are stored; ``V_{-g} = conj(V_g)`` so V is real.
    """

    coeffs: tuple

    def __post_init__(self):
        c = tuple(complex(v) for v in self.coeffs)
        if not c:
            raise ConfigError("potential needs at least one harmonic")
        if c[-1] == 0:
            raise ConfigError("highest harmonic V_N must be nonzero")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def cosine(cls, amplitude: float = -1.0, phase: float = 0.0) -> "Potential":
        """``amplitude * cos(x + phase)``; the default is ``V(x) = -cos(x)``."""
        return cls((0.5 * amplitude * np.exp(1j * phase),))

    @property
    def N(self) -> int:
        return len(self.coeffs)

    @property
    def harmonics(self) -> np.ndarray:
        return np.arange(1, self.N + 1)

    def coefficient(self, g: int) -> complex:
        """V_g for any integer g (zero outside [-N, N] and at g = 0)."""
        if g == 0 or abs(g) > self.N:
            return 0j
        v = self.coeffs[abs(g) - 1]
        return v if g > 0 else v.conjugate()

    def value(self, x):
        x = np.asarray(x, dtype=float)
        g = self.harmonics
        c = np.asarray(self.coeffs)
        phases = np.exp(1j * np.multiply.outer(x, g))
        return 2.0 * np.real(phases @ c)

    def force(self, x):
        """``f(x) = -dV/dx``."""
        x = np.asarray(x, dtype=float)
        g = self.harmonics
        c = np.asarray(self.coeffs) * (1j * g)
        phases = np.exp(1j * np.multiply.outer(x, g))
        return -2.0 * np.real(phases @ c)

    def to_list(self) -> list:
        return [[v.real, v.imag] for v in self.coeffs]

    @classmethod
    def from_list(cls, items: Sequence) -> "Potential":
        out = []
        for item in items:
            if isinstance(item, (list, tuple)):
                re, im = item
                out.append(complex(re, im))
            else:
                out.append(complex(item))
        return cls(tuple(out))


@dataclass(frozen=True)
class ResonanceData:
    k: int
    l: int
    n_prime: int
    l_prime: int
    r: int
    n: int = N_ROT


def derive_resonance(eta_fraction: Fraction) -> ResonanceData:
    """Resonance integers for ``eta/(2 pi) = k/l`` with n = 4."""
    eta_fraction = as_fraction(eta_fraction)
    k, l = eta_fraction.numerator, eta_fraction.denominator
    ratio = Fraction(N_ROT, l)
    r = N_ROT * l // math.gcd(N_ROT, l)
    res = ResonanceData(k=k, l=l, n_prime=ratio.numerator, l_prime=ratio.denominator, r=r)
    assert res.r == N_ROT * res.l_prime
    return res


@dataclass(frozen=True)
class SystemParams:
    """All model parameters.

    ``mu = kappa/hbar`` is the stored kick strength; ``hbar = 2*pi*hbar_s``.
    ``hbar_s`` is either an exact Fraction (band spectra) or a float.
    """

    potential: Potential
    eta: Fraction
    x_c: float = 0.0
    hbar_s: HbarS = Fraction(1, 2)
    mu: float = 0.1
    resonance: ResonanceData = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "eta", as_fraction(self.eta))
        if isinstance(self.hbar_s, str):
            object.__setattr__(self, "hbar_s", as_fraction(self.hbar_s))
        elif isinstance(self.hbar_s, int) and not isinstance(self.hbar_s, bool):
            object.__setattr__(self, "hbar_s", Fraction(self.hbar_s))
        if not isinstance(self.hbar_s, Fraction):
            object.__setattr__(self, "hbar_s", float(self.hbar_s))
        if self.mu < 0:
            raise ConfigError("mu must be non-negative")
        if float(self.hbar_s) <= 0:
            raise ConfigError("hbar_s must be positive")
        object.__setattr__(self, "resonance", derive_resonance(self.eta))

    @classmethod
    def from_kappa(cls, potential: Potential, eta, x_c: float, kappa: float,
                   hbar_s: HbarS = 1.0 / (2.0 * math.pi)) -> "SystemParams":
        """Construct from the classical kick strength; default hbar = 1 so mu = kappa."""
        return cls(potential, eta, x_c, hbar_s, kappa / (2.0 * math.pi * float(hbar_s)))

    def replace(self, **changes) -> "SystemParams":
        kw = dict(potential=self.potential, eta=self.eta, x_c=self.x_c,
                  hbar_s=self.hbar_s, mu=self.mu)
        kw.update(changes)
        return SystemParams(**kw)

    @property
    def eta_angle(self) -> float:
        return 2.0 * math.pi * float(self.eta)

    @property
    def hbar(self) -> float:
        return 2.0 * math.pi * float(self.hbar_s)

    @property
    def kappa(self) -> float:
        return self.mu * self.hbar

    @property
    def r(self) -> int:
        return self.resonance.r

    @property
    def l_prime(self) -> int:
        return self.resonance.l_prime

    @property
    def hbar_fraction(self) -> Fraction:
        if not isinstance(self.hbar_s, Fraction):
            raise ConfigError("an exact rational hbar_s = q/p is required here")
        return self.hbar_s

    def to_dict(self) -> dict:
        hs = self.hbar_s
        return {
            "potential": self.potential.to_list(),
            "eta": fraction_str(self.eta),
            "x_c": self.x_c,
            "hbar_s": fraction_str(hs) if isinstance(hs, Fraction) else hs,
            "mu": self.mu,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SystemParams":
        return cls(Potential.from_list(d["potential"]), as_fraction(d["eta"]),
                   float(d.get("x_c", 0.0)), d["hbar_s"], float(d["mu"]))


def is_integer(x: float, tol: float = INTEGER_TOL) -> bool:
    return abs(x - round(x)) < tol


def is_swc(params: SystemParams) -> bool:
    """Generic superweak-chaos condition ``l' > N``."""
    return params.l_prime > params.potential.N


def is_strong_swc(params: SystemParams) -> bool:
    """``l' > 2N``: the x_c-independent, doubled-spectrum regime."""
    return params.l_prime > 2 * params.potential.N


def eval_potential(potential: Potential, x):
    return potential.value(x)


def eval_force(potential: Potential, x):
    return potential.force(x)
