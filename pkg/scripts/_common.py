"""Shared setup for the experiment scripts."""
import math
from fractions import Fraction

from kickedhall.classical import find_fixed_points, select_center
from kickedhall.config import GOLDEN_HBAR
from kickedhall.core import Potential, SystemParams
from kickedhall.evolution import evolve, init_coherent_fibers


def golden_params(eta, x_c=0.0, mu=0.1):
    return SystemParams(Potential.cosine(), Fraction(eta), x_c, GOLDEN_HBAR, mu)


def run_packet(params, s_max, n_beta=32, target=(math.pi / 2, math.pi / 2), record_every=None):
    """Coherent packet on the fixed point nearest ``target``, evolved to s_max (rounded up to r)."""
    center = select_center(find_fixed_points(params), target)
    s_max = params.r * math.ceil(s_max / params.r)
    if record_every is not None:
        record_every = params.r * max(1, round(record_every / params.r))
    res = evolve(init_coherent_fibers(center, params, n_beta), params, s_max,
                 record_every=record_every, center=center)
    return center, res
