"""Classical one-period and r-period maps of the kicked Hall system.

With gamma = pi/2 the one-period map is

    z_{s+1} = [z_s + kappa f(x_c + s*eta - v_s)] * exp(-i*pi/2),   z = u + i v

i.e. ``u' = v`` and ``v' = -(u + kappa f)``.  All array-valued routines accept
numpy arrays of points and are vectorized over them.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .core import SystemParams
from .errors import DegenerateFit, DegenerateInput

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
JACOBIAN_STEP = 1e-6


@dataclass(frozen=True)
class PhasePoint:
    u: float
    v: float

    @property
    def z(self) -> complex:
        return complex(self.u, self.v)

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v])


@dataclass(frozen=True)
class FixedPoint:
    point: PhasePoint
    residue_trace: float
    kind: str
    jacobian: np.ndarray

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.jacobian))


@dataclass
class SpreadSeries:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=int)
        self.values = np.asarray(self.values, dtype=float)


def fold(x):
    """Map coordinates into [-pi, pi)."""
    return (np.asarray(x) + math.pi) % TWO_PI - math.pi


def _step_arrays(u, v, s: int, params: SystemParams):
    x = params.x_c + s * params.eta_angle - v
    return v, -(u + params.kappa * params.potential.force(x))


def _inverse_step_arrays(u, v, s: int, params: SystemParams):
    v_prev = u
    x = params.x_c + s * params.eta_angle - v_prev
    return -v - params.kappa * params.potential.force(x), v_prev


def step_map(z: PhasePoint, s: int, params: SystemParams) -> PhasePoint:
    u, v = _step_arrays(z.u, z.v, s, params)
    return PhasePoint(float(u), float(v))


def inverse_step_map(z: PhasePoint, s: int, params: SystemParams) -> PhasePoint:
    """Undo :func:`step_map` taken at step index ``s``."""
    u, v = _inverse_step_arrays(z.u, z.v, s, params)
    return PhasePoint(float(u), float(v))


def basic_map_arrays(u, v, params: SystemParams, s0: int = 0, periods: int = 1):
    for s in range(s0, s0 + periods * params.r):
        u, v = _step_arrays(u, v, s, params)
    return u, v


def basic_map(z: PhasePoint, params: SystemParams, s0: int = 0) -> PhasePoint:
    """The r-step map, the smallest iterate that is near-identity for small kappa."""
    u, v = basic_map_arrays(np.float64(z.u), np.float64(z.v), params, s0)
    return PhasePoint(float(u), float(v))


def jacobian(func, point: np.ndarray, h: float = JACOBIAN_STEP) -> np.ndarray:
    """Central-difference Jacobian of ``func: R^2 -> R^2``."""
    point = np.asarray(point, dtype=float)
    jac = np.empty((2, 2))
    for i in range(2):
        e = np.zeros(2)
        e[i] = h
        jac[:, i] = (np.asarray(func(point + e)) - np.asarray(func(point - e))) / (2 * h)
    return jac


def _basic_map_vec(params: SystemParams, s0: int = 0):
    def f(p):
        u, v = basic_map_arrays(p[0], p[1], params, s0)
        return np.array([u, v])
    return f


def displacement_scaling(params: SystemParams, kappas: Sequence[float],
                         points: Sequence[PhasePoint]) -> float:
    """Log-log slope of ``max |z_r - z_0|`` against kappa.

    About 2 under superweak chaos and about 1 for ordinary weak chaos.
    """
    kappas = np.asarray(kappas, dtype=float)
    u0 = np.array([p.u for p in points])
    v0 = np.array([p.v for p in points])
    disp = []
    for kappa in kappas:
        p = params.replace(mu=kappa / params.hbar)
        u, v = basic_map_arrays(u0, v0, p)
        disp.append(np.max(np.hypot(u - u0, v - v0)))
    disp = np.asarray(disp)
    if np.all(disp < 1e-14):
        raise DegenerateFit("all displacements below 1e-14; widen the kappa range")
    keep = disp > 0
    slope, _ = np.polyfit(np.log(kappas[keep]), np.log(disp[keep]), 1)
    return float(slope)


def classify(trace: float, tol: float = 1e-9) -> str:
    if abs(abs(trace) - 2.0) <= tol:
        return "parabolic"
    return "hyperbolic" if abs(trace) > 2.0 else "elliptic"


def default_seeds(n: int = 16) -> List[PhasePoint]:
    grid = -math.pi + TWO_PI * (np.arange(n) + 0.5) / n
    return [PhasePoint(float(a), float(b)) for a in grid for b in grid]


def find_fixed_points(params: SystemParams, seeds: Optional[Sequence[PhasePoint]] = None,
                      max_iter: int = 50, tol: float = 1e-12) -> List[FixedPoint]:
    """Newton search for fixed points of the basic map inside one unit cell.

    Seeds that fail to converge within ``max_iter`` steps are dropped and
    logged.  Roots are folded into [-pi, pi)^2 and deduplicated.
    """
    if params.kappa < 1e-12:
        raise DegenerateInput("kappa ~ 0: the basic map is the identity")
    seeds = default_seeds() if seeds is None else seeds
    fmap = _basic_map_vec(params)
    found: List[np.ndarray] = []
    dropped = 0
    for seed in seeds:
        z = seed.as_array()
        ok = False
        for _ in range(max_iter):
            res = fmap(z) - z
            if np.max(np.abs(res)) < tol:
                ok = True
                break
            jf = jacobian(fmap, z) - np.eye(2)
            try:
                dz = np.linalg.solve(jf, -res)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(dz)):
                break
            z = z + dz
        if not ok:
            dropped += 1
            continue
        zf = fold(z)
        if not any(np.max(np.abs(fold(zf - other))) < 1e-6 for other in found):
            found.append(zf)
    if dropped:
        log.info("fixed-point search: %d of %d seeds did not converge", dropped, len(seeds))
    out = []
    for z in found:
        jac = jacobian(fmap, z)
        tr = float(np.trace(jac))
        out.append(FixedPoint(PhasePoint(float(z[0]), float(z[1])), tr, classify(tr), jac))
    return out


def select_center(points: Sequence[FixedPoint], target=(0.0, 0.0),
                  kind: str = "hyperbolic", rel_tie: float = 0.05) -> FixedPoint:
    """Fixed point of the given kind nearest ``target``.

    Near-ties (within ``rel_tie`` of the best distance) go to the largest
    ``u + v/2``, so that small parameter changes keep the same choice.
    """
    cands = [p for p in points if p.kind == kind]
    if not cands:
        raise DegenerateInput(f"no {kind} fixed point found")
    t = np.asarray(target, dtype=float)
    dist = [float(np.hypot(*(p.point.as_array() - t))) for p in cands]
    best = min(dist)
    near = [p for p, d in zip(cands, dist) if d <= best * (1 + rel_tie) + 1e-12]
    return max(near, key=lambda p: p.point.u + 0.5 * p.point.v)


def sample_web(params: SystemParams, start: PhasePoint, n_steps: int,
               unfolded: bool = False) -> np.ndarray:
    """Orbit of the basic map from ``start``; rows are (u, v).

    Points are folded into [-pi, pi)^2 unless ``unfolded`` is set.
    """
    pot = params.potential
    gs = [(g, c.real, c.imag) for g, c in enumerate(pot.coeffs, start=1)]
    kappa = params.kappa
    phases = [params.x_c + s * params.eta_angle for s in range(params.r)]
    sin, cos = math.sin, math.cos

    def force(x):
        return 2.0 * sum(g * (a * sin(g * x) + b * cos(g * x)) for g, a, b in gs)

    out = np.empty((n_steps + 1, 2))
    u, v = start.u, start.v
    out[0] = u, v
    for n in range(1, n_steps + 1):
        for ph in phases:
            u, v = v, -(u + kappa * force(ph - v))
        out[n] = u, v
    return out if unfolded else fold(out)


def sample_disk(center: PhasePoint, radius: float, n: int, rng: np.random.Generator):
    """Uniform samples on a disk: radius*sqrt(U1), angle 2*pi*U2."""
    rad = radius * np.sqrt(rng.random(n))
    ang = TWO_PI * rng.random(n)
    return center.u + rad * np.cos(ang), center.v + rad * np.sin(ang)


def classical_spread(params: SystemParams, center: FixedPoint, n_samples: int, s_max: int,
                     seed: int = 0, reference: str = "initial") -> SpreadSeries:
    """Ensemble mean of ``(u_s - u_0)^2 + (v_s - v_0)^2`` every r kicks.

    Initial conditions fill a disk of radius sqrt(2*hbar) about ``center``.
    With ``reference="center"`` the displacement is measured from the fixed
    point instead of from each initial condition.
    """
    r = params.r
    if s_max % r:
        raise ValueError("s_max must be a multiple of r")
    rng = np.random.default_rng(seed)
    pt = center.point if isinstance(center, FixedPoint) else center
    u0, v0 = sample_disk(pt, math.sqrt(2.0 * params.hbar), n_samples, rng)
    ref_u, ref_v = (u0, v0) if reference == "initial" else (pt.u, pt.v)
    times = np.arange(0, s_max + 1, r)
    values = np.empty(len(times))
    u, v = u0.copy(), v0.copy()
    values[0] = np.mean((u - ref_u) ** 2 + (v - ref_v) ** 2)
    for i in range(1, len(times)):
        u, v = basic_map_arrays(u, v, params)
        values[i] = np.mean((u - ref_u) ** 2 + (v - ref_v) ** 2)
    return SpreadSeries(times, values)
