"""Fibrated wave-packet evolution.

A wave packet is split into Bloch fibers of fixed quasimomentum ``beta*hbar``;
fiber beta lives on the lattice ``v = (l + beta) hbar``.  One r-kick cycle
(rotating frame, kick index j' = 0..r-1) is

* even j': multiply by ``exp{-i mu V[x_c + j' eta - (-1)^(j'/2) (l + beta) hbar]}``
* odd j':  convolve with the Fourier coefficients of
  ``exp[-i mu V(x_c + j' eta + u)]`` at index ``(-1)^((j'-1)/2) (l - l')``.

Expectation values of v-functions are sums over fibers weighted by 2*pi.
u-functions are evaluated by a discrete Fourier transform of all fibers
interleaved onto one fine v-grid (spacing hbar/n_beta), which resolves the
packet on a u-period of length ``2 pi n_beta`` centred on the fixed point.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .classical import FixedPoint, PhasePoint, SpreadSeries
from .core import SystemParams
from .errors import DegenerateFit, IncompatibleRuns, WindowTooSmall
from .spectrum import certified_truncation, kick_fourier_coeffs

log = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
EDGE_TOL = 1e-12
TRIM_TOL = 1e-16
WINDOW_CAP = 2 ** 16


@dataclass
class FiberState:
    beta: float
    l_min: int
    amplitudes: np.ndarray

    @property
    def l_max(self) -> int:
        return self.l_min + len(self.amplitudes) - 1

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.l_min, self.l_max + 1)

    def edge_ratio(self, width: int = 1) -> float:
        a = np.abs(self.amplitudes)
        top = a.max()
        if top == 0:
            return 0.0
        return float(max(a[:width].max(), a[-width:].max()) / top)


def _center(center) -> PhasePoint:
    return center.point if isinstance(center, FixedPoint) else center


def coherent_amplitude(v, center: PhasePoint, hbar: float):
    """v-representation of the coherent state centred at (u', v').

    With ``Phi(u) = hbar^-1 * int dv exp(iuv/hbar) Phibar(v)`` the state
    ``(pi hbar)^(-1/4) exp[i v' u/hbar - (u - u')^2/(2 hbar)]`` transforms to

        Phibar(v) = (pi hbar)^(-1/4) sqrt(2 pi hbar)/(2 pi)
                    * exp[-i (v - v') u'/hbar - (v - v')^2/(2 hbar)].
    """
    dv = np.asarray(v) - center.v
    pref = (math.pi * hbar) ** -0.25 * math.sqrt(TWO_PI * hbar) / TWO_PI
    return pref * np.exp(-1j * dv * center.u / hbar - dv ** 2 / (2.0 * hbar))


def beta_grid(n_beta: int) -> np.ndarray:
    return (np.arange(n_beta) + 0.5) / n_beta


def init_coherent_fibers(center, params: SystemParams, n_beta: int = 32,
                         window_half: int = 64) -> List[FiberState]:
    pt = _center(center)
    hbar = params.hbar
    l0 = int(round(pt.v / hbar))
    fibers = []
    for beta in beta_grid(n_beta):
        l = np.arange(l0 - window_half, l0 + window_half + 1)
        amp = coherent_amplitude((l + beta) * hbar, pt, hbar)
        fibers.append(FiberState(float(beta), int(l[0]), amp))
    tail = max(max(abs(f.amplitudes[0]), abs(f.amplitudes[-1])) for f in fibers)
    if tail > 1e-14:
        raise WindowTooSmall(f"coherent-state tail {tail:.1e} at window edge; raise window_half")
    return fibers


def fiber_norm(fibers: Sequence[FiberState]) -> float:
    """``int_0^1 dbeta 2 pi sum_l |Phibar|^2`` by the midpoint rule."""
    return float(np.mean([TWO_PI * np.sum(np.abs(f.amplitudes) ** 2) for f in fibers]))


def _diag_phase(params: SystemParams, j_prime: int, v):
    sign = 1.0 if (j_prime // 2) % 2 == 0 else -1.0
    x = params.x_c + j_prime * params.eta_angle - sign * np.asarray(v)
    return np.exp(-1j * params.mu * params.potential.value(x))


def kick_diagonal(fiber: FiberState, j_prime: int, params: SystemParams) -> FiberState:
    if j_prime % 2:
        raise ValueError("diagonal kicks have even j'")
    v = (fiber.sites + fiber.beta) * params.hbar
    return FiberState(fiber.beta, fiber.l_min, fiber.amplitudes * _diag_phase(params, j_prime, v))


def _conv_kernel(params: SystemParams, j_prime: int, l_trunc: int) -> np.ndarray:
    """Kernel k[n], n = -T..T, with out[l] = sum_n k[n] in[l - n]."""
    c = kick_fourier_coeffs(params.potential, params.x_c + j_prime * params.eta_angle,
                            params.mu, l_trunc)
    return c if (j_prime // 2) % 2 == 0 else c[::-1]


def kick_convolution(fiber: FiberState, j_prime: int, params: SystemParams,
                     l_trunc: int) -> FiberState:
    if j_prime % 2 == 0:
        raise ValueError("convolution kicks have odd j'")
    kern = _conv_kernel(params, j_prime, l_trunc)
    out = np.convolve(fiber.amplitudes, kern)
    l_min = fiber.l_min - l_trunc
    mag = np.abs(out)
    keep = np.nonzero(mag >= TRIM_TOL * max(mag.max(), 1e-300))[0]
    if keep.size:
        out = out[keep[0]:keep[-1] + 1]
        l_min += int(keep[0])
    return FiberState(fiber.beta, l_min, out)


# --------------------------------------------------------------------------- evolve

@dataclass
class EvolutionResult:
    spread: SpreadSeries
    fidelity: np.ndarray            # (n_records, 2): s, |<Phi_0|Phi_s>|
    tau: np.ndarray
    spread_u: np.ndarray
    spread_v: np.ndarray
    norm: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        return self.spread.times


class _FiberBatch:
    """All fibers on one common l-window, evolved together."""

    def __init__(self, fibers: Sequence[FiberState], params: SystemParams, l_trunc: int):
        self.params = params
        self.betas = np.array([f.beta for f in fibers])
        self.l_trunc = l_trunc
        lo = min(f.l_min for f in fibers)
        hi = max(f.l_max for f in fibers)
        margin = 4 * l_trunc + 16
        size = 1 << int(math.ceil(math.log2(hi - lo + 1 + 2 * margin)))
        self.l_min = lo - (size - (hi - lo + 1)) // 2
        self.amp = np.zeros((len(fibers), size), dtype=complex)
        for i, f in enumerate(fibers):
            self.amp[i, f.l_min - self.l_min:f.l_max - self.l_min + 1] = f.amplitudes
        self._rebuild()

    @property
    def size(self) -> int:
        return self.amp.shape[1]

    def _rebuild(self):
        params, n = self.params, self.size
        self.v = (self.l_min + np.arange(n)[None, :] + self.betas[:, None]) * params.hbar
        self.kernels = {}
        for jp in range(1, params.r, 2):
            kern = _conv_kernel(params, jp, self.l_trunc)
            padded = np.zeros(n, dtype=complex)
            idx = np.arange(-self.l_trunc, self.l_trunc + 1) % n
            padded[idx] = kern
            self.kernels[jp] = np.fft.fft(padded)
        budget = (params.r // 2) * self.amp.size * 16
        self.phases = None
        if budget < 64 * 2 ** 20:
            self.phases = {jp: _diag_phase(params, jp, self.v) for jp in range(0, params.r, 2)}

    def grow(self):
        n = self.size
        if 2 * n > WINDOW_CAP:
            raise WindowTooSmall(f"window would exceed {WINDOW_CAP} sites")
        pad = n // 2
        self.amp = np.pad(self.amp, ((0, 0), (pad, pad)))
        self.l_min -= pad
        self._rebuild()

    def edges_ok(self) -> bool:
        w = self.l_trunc + 8
        a = np.abs(self.amp)
        top = a.max()
        return max(a[:, :w].max(), a[:, -w:].max()) <= EDGE_TOL * top

    def kick(self, jp: int):
        if jp % 2 == 0:
            ph = self.phases[jp] if self.phases is not None else _diag_phase(self.params, jp, self.v)
            self.amp *= ph
        else:
            if not self.edges_ok():
                self.grow()
            self.amp = np.fft.ifft(np.fft.fft(self.amp, axis=1) * self.kernels[jp], axis=1)

    # observables --------------------------------------------------------------
    def norm(self) -> float:
        return float(TWO_PI * np.sum(np.abs(self.amp) ** 2) / len(self.betas))

    def spread_v(self, v0: float) -> float:
        w = np.abs(self.amp) ** 2
        return float(TWO_PI * np.sum(w * (self.v - v0) ** 2) / len(self.betas))

    def spread_u(self, u0: float) -> tuple:
        """``<(u - u0)^2>`` and the probability in the outer tenth of the u-period."""
        nb = len(self.betas)
        order = np.argsort(self.betas)
        if not np.allclose(np.diff(self.betas[order]), 1.0 / nb):
            raise ValueError("u-observables need the uniform midpoint beta grid")
        f = self.amp[order].T.reshape(-1)        # l-major, beta-minor: uniform v grid
        k_tot = f.size
        k = np.arange(k_tot)
        u_start = u0 - math.pi * nb
        phi = np.fft.ifft(f * np.exp(1j * u_start * k / nb)) * k_tot
        du = TWO_PI * nb / k_tot
        dens = np.abs(phi) ** 2 / nb ** 2 * du
        u = u_start + du * k
        tail = np.abs(u - u0) > 0.8 * math.pi * nb
        return float(np.sum(dens * (u - u0) ** 2)), float(np.sum(dens[tail]))

    def overlap(self, ref: np.ndarray, ref_lmin: int) -> complex:
        off = ref_lmin - self.l_min
        seg = self.amp[:, off:off + ref.shape[1]]
        return complex(TWO_PI * np.sum(np.conj(ref) * seg) / len(self.betas))

    def to_fibers(self) -> List[FiberState]:
        return [FiberState(float(b), self.l_min, self.amp[i].copy()) for i, b in enumerate(self.betas)]


def scaled_time(s, params: SystemParams):
    return np.asarray(s) / (8.0 * abs(math.cos(params.eta_angle)))


def evolve(fibers: Sequence[FiberState], params: SystemParams, s_max: int,
           record_every: Optional[int] = None, center=None,
           l_trunc: Optional[int] = None) -> EvolutionResult:
    """Apply ``s_max/r`` basic cycles to every fiber and record observables.

    ``record_every`` is in kicks and must be a multiple of r (default r).
    ``center`` is the fixed point the spread is measured from.
    """
    r = params.r
    record_every = r if record_every is None else record_every
    if s_max % r or record_every % r:
        raise ValueError("s_max and record_every must be multiples of r")
    if l_trunc is None:
        l_trunc = certified_truncation(params.potential, params.mu)
    pt = _center(center) if center is not None else PhasePoint(0.0, 0.0)
    batch = _FiberBatch(fibers, params, l_trunc)
    ref = batch.amp.copy()
    ref_lmin = batch.l_min
    ref_norm = batch.norm()

    times, su, sv, fid, norms, tails = [], [], [], [], [], []

    def record(s):
        u2, tail = batch.spread_u(pt.u)
        times.append(s)
        su.append(u2)
        sv.append(batch.spread_v(pt.v))
        fid.append(abs(batch.overlap(ref, ref_lmin)) / ref_norm)
        norms.append(batch.norm())
        tails.append(tail)

    record(0)
    for s in range(r, s_max + 1, r):
        for jp in range(r):
            batch.kick(jp)
        if s % record_every == 0:
            record(s)

    times = np.array(times)
    su, sv = np.array(su), np.array(sv)
    meta = {
        "params": params.to_dict(),
        "center": [pt.u, pt.v],
        "n_beta": len(batch.betas),
        "l_trunc": l_trunc,
        "final_window": batch.size,
        "u_period": TWO_PI * len(batch.betas),
        "max_u_tail": float(max(tails)),
        "convention": "rotating-frame kicks x_c + j' eta, j' = 0..r-1",
    }
    if meta["max_u_tail"] > 1e-6:
        log.warning("u-period tail probability %.1e: increase n_beta", meta["max_u_tail"])
    return EvolutionResult(SpreadSeries(times, su + sv), np.column_stack([times, fid]),
                           scaled_time(times, params), su, sv, np.array(norms), meta)


def universality_collapse(results: Sequence[EvolutionResult], tau_max: Optional[float] = None,
                          series: str = "spread") -> float:
    """Largest relative spread between curves re-gridded onto common tau.

    Relative spread at each tau is ``(max - min)/mean`` across runs; tau runs
    up to the smallest per-run maximum (or ``tau_max`` if smaller).
    """
    if not results:
        raise IncompatibleRuns("no runs given")
    if len(results) == 1:
        return 0.0
    keys = {(r.metadata["params"]["mu"], str(r.metadata["params"]["hbar_s"]),
             str(r.metadata["params"]["potential"])) for r in results}
    if len(keys) != 1:
        raise IncompatibleRuns("runs must share mu, hbar_s and the potential")
    top = min(float(r.tau[-1]) for r in results)
    if tau_max is not None:
        top = min(top, tau_max)
    finest = min(float(np.min(np.diff(r.tau))) for r in results)
    grid = np.linspace(0.0, top, max(2, int(top / finest) + 1))
    curves = np.array([np.interp(grid, r.tau, getattr(r, series).values
                                 if series == "spread" else getattr(r, series)) for r in results])
    rel = (curves.max(axis=0) - curves.min(axis=0)) / curves.mean(axis=0)
    return float(rel.max())


def growth_exponent(times, values, window) -> float:
    """Log-log slope of values against s over ``window = (s1, s2)``."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    s1, s2 = window
    sel = (times >= s1) & (times <= s2) & (times > 0)
    if sel.sum() < 2:
        raise DegenerateFit("fewer than two samples in the fit window")
    y = values[sel]
    if np.ptp(y) <= 1e-9 * max(np.max(np.abs(y)), 1e-300):
        raise DegenerateFit("series is constant over the window")
    slope, _ = np.polyfit(np.log(times[sel]), np.log(y), 1)
    return float(slope)


def growth_rate(times, values, window) -> float:
    """Least-squares linear slope d(values)/ds over the window."""
    times = np.asarray(times, dtype=float)
    sel = (times >= window[0]) & (times <= window[1])
    if sel.sum() < 2:
        raise DegenerateFit("fewer than two samples in the fit window")
    slope, _ = np.polyfit(times[sel], np.asarray(values)[sel], 1)
    return float(slope)


# ------------------------------------------------------- rational-hbar cross-check

def ring_cycle_matrix(params: SystemParams, beta: float, phi: float,
                      l_trunc: Optional[int] = None) -> np.ndarray:
    """One r-kick cycle restricted to Bloch states of a fiber.

    At hbar_s = q/p the diagonal phases are p-periodic in l, so the cycle maps
    states with ``c[l + p] = exp(i phi) c[l]`` into themselves.  In the band
    picture this block has the spectrum of M_r at ``w = (2 pi q beta/p, phi/p)``.
    """
    hs = params.hbar_fraction
    p = hs.denominator
    if l_trunc is None:
        l_trunc = certified_truncation(params.potential, params.mu)
    sites = np.arange(p)
    n = np.arange(-l_trunc, l_trunc + 1)
    out = np.eye(p, dtype=complex)
    for jp in range(params.r):
        if jp % 2 == 0:
            out = _diag_phase(params, jp, (sites + beta) * params.hbar)[:, None] * out
            continue
        kern = _conv_kernel(params, jp, l_trunc)
        block = np.zeros((p, p), dtype=complex)
        for a in sites:
            t, m = np.divmod(a - n, p)
            np.add.at(block[a], m, kern * np.exp(1j * phi * t))
        out = block @ out
    return out


def harmonic_inversion(series, n_modes: int) -> np.ndarray:
    """Eigenvalues ``z_k`` of a signal ``c_n = sum_k a_k z_k^n`` (matrix pencil)."""
    c = np.asarray(series, dtype=complex)
    rows = len(c) - n_modes
    if rows < n_modes:
        raise ValueError("need at least 2*n_modes samples")
    h = np.array([c[i:i + n_modes + 1] for i in range(rows)])
    return np.linalg.eigvals(np.linalg.lstsq(h[:, :-1], h[:, 1:], rcond=None)[0])


def ring_eigenphases_from_series(params: SystemParams, beta: float, phi: float,
                                 n_steps: Optional[int] = None, seed: int = 0) -> np.ndarray:
    """Quasienergies of a fiber's Bloch block read off its autocorrelation series."""
    u = ring_cycle_matrix(params, beta, phi)
    p = u.shape[0]
    n_steps = 4 * p if n_steps is None else n_steps
    rng = np.random.default_rng(seed)
    psi0 = rng.normal(size=p) + 1j * rng.normal(size=p)
    psi0 /= np.linalg.norm(psi0)
    psi, series = psi0.copy(), []
    for _ in range(n_steps):
        series.append(np.vdot(psi0, psi))
        psi = u @ psi
    e = -np.angle(harmonic_inversion(series, p))
    return np.sort(np.where(e <= -math.pi, e + TWO_PI, e))
