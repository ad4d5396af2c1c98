"""Real 2*pi-periodic functions of (u, v) stored as sparse Fourier sums."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

Key = Tuple[int, int]


@dataclass
class FourierSurface:
    """``sum c[gu, gv] * exp(i(gu*u + gv*v))``.

    Used both for the effective-Hamiltonian symbols and, with phase-space
    operators in place of (u, v), for their Weyl-ordered quantum versions.
    """

    terms: Dict[Key, complex] = field(default_factory=dict)

    def add(self, key: Key, value: complex) -> None:
        key = (int(key[0]), int(key[1]))
        self.terms[key] = self.terms.get(key, 0j) + complex(value)

    def add_cos(self, gu: int, gv: int, amplitude: float, phase: float = 0.0) -> None:
        """Add ``amplitude * cos(gu*u + gv*v + phase)``."""
        half = 0.5 * amplitude
        self.add((gu, gv), half * np.exp(1j * phase))
        self.add((-gu, -gv), half * np.exp(-1j * phase))

    def pruned(self, tol: float = 0.0) -> "FourierSurface":
        return FourierSurface({k: v for k, v in self.terms.items() if abs(v) > tol})

    def max_abs(self) -> float:
        return max((abs(v) for v in self.terms.values()), default=0.0)

    def is_zero(self, tol: float = 1e-12) -> bool:
        return self.max_abs() <= tol

    def hermitian_error(self) -> float:
        """Largest ``|c[-g] - conj(c[g])|``; zero for a real-valued function."""
        err = 0.0
        for (gu, gv), c in self.terms.items():
            partner = self.terms.get((-gu, -gv), 0j)
            err = max(err, abs(partner - np.conj(c)))
        return err

    def difference(self, other: "FourierSurface") -> float:
        keys = set(self.terms) | set(other.terms)
        return max((abs(self.terms.get(k, 0j) - other.terms.get(k, 0j)) for k in keys),
                   default=0.0)

    def __call__(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        out = np.zeros(np.broadcast(u, v).shape, dtype=complex)
        for (gu, gv), c in self.terms.items():
            out += c * np.exp(1j * (gu * u + gv * v))
        return out.real

    def to_json(self) -> list:
        return [{"gu": gu, "gv": gv, "re": c.real, "im": c.imag}
                for (gu, gv), c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, items: list) -> "FourierSurface":
        return cls({(int(d["gu"]), int(d["gv"])): complex(d["re"], d["im"]) for d in items})
