import math
from fractions import Fraction

import numpy as np
import pytest

from kickedhall.classical import (PhasePoint, basic_map, basic_map_arrays, classical_spread,
                                  displacement_scaling, find_fixed_points, fold, inverse_step_map,
                                  jacobian, sample_web, select_center, step_map)
from kickedhall.core import Potential, SystemParams
from kickedhall.errors import DegenerateFit, DegenerateInput


def _points(rng, n):
    return [PhasePoint(*rng.uniform(-math.pi, math.pi, 2)) for _ in range(n)]


def test_step_symplectic(generic_potential, rng):
    params = SystemParams.from_kappa(generic_potential, "3/5", 0.4, 0.7)
    worst = 0.0
    for z in _points(rng, 100):
        s = int(rng.integers(0, 40))
        jac = jacobian(lambda x: step_map(PhasePoint(*x), s, params).as_array(), z.as_array())
        worst = max(worst, abs(np.linalg.det(jac) - 1))
    assert worst < 1e-9


def test_step_reversible(generic_potential, rng):
    params = SystemParams.from_kappa(generic_potential, "8/13", 1.1, 0.9)
    for z in _points(rng, 50):
        back = inverse_step_map(step_map(z, 7, params), 7, params)
        assert abs(back.u - z.u) < 1e-12 and abs(back.v - z.v) < 1e-12


def test_translation_symmetry(cosine, rng):
    params = SystemParams.from_kappa(cosine, "2/3", 0.3, 0.4)
    for z in _points(rng, 20):
        ref = basic_map(z, params)
        for du, dv in [(2 * math.pi, 0), (0, 2 * math.pi)]:
            moved = basic_map(PhasePoint(z.u + du, z.v + dv), params)
            assert abs(moved.u - du - ref.u) < 1e-12 and abs(moved.v - dv - ref.v) < 1e-12


def test_rotation_without_kicks(cosine):
    params = SystemParams.from_kappa(cosine, "2/3", 0.0, 0.0)
    z = step_map(PhasePoint(0.3, 0.7), 0, params)
    assert (z.u, z.v) == pytest.approx((0.7, -0.3))
    assert basic_map(PhasePoint(0.3, 0.7), params) == PhasePoint(0.3, 0.7)


def test_fixed_points_and_classification(cosine):
    params = SystemParams.from_kappa(cosine, "2/3", 0.0, 0.2)
    pts = find_fixed_points(params)
    assert pts
    for fp in pts:
        z = basic_map(fp.point, params)
        assert np.max(np.abs(fold(np.array([z.u - fp.point.u, z.v - fp.point.v])))) < 1e-10
        assert abs(fp.det - 1) < 1e-8
    kinds = {fp.kind for fp in pts}
    assert {"hyperbolic", "elliptic"} <= kinds
    with pytest.raises(DegenerateInput):
        find_fixed_points(params.replace(mu=0.0))


def test_select_center_prefers_nearest(cosine):
    params = SystemParams.from_kappa(cosine, "0/1", 0.0, 0.05)
    c = select_center(find_fixed_points(params), target=(math.pi, 0.0))
    assert c.kind == "hyperbolic"
    assert abs(abs(c.point.u) - math.pi) < 1e-6 and abs(c.point.v) < 1e-6


def test_displacement_slopes(cosine):
    pts = [PhasePoint(a, b) for a in np.linspace(-3, 3, 7) for b in np.linspace(-3, 3, 7)]
    kappas = [0.001, 0.002, 0.004, 0.008]
    swc = displacement_scaling(SystemParams.from_kappa(cosine, "2/3", 0.0, 0.01), kappas, pts)
    weak = displacement_scaling(SystemParams.from_kappa(cosine, "1/4", 0.0, 0.01), kappas, pts)
    assert abs(swc - 2.0) < 0.1 and abs(weak - 1.0) < 0.1
    with pytest.raises(DegenerateFit):
        displacement_scaling(SystemParams.from_kappa(cosine, "2/3", 0.0, 0.01), [1e-20, 2e-20],
                             [PhasePoint(0.0, 0.0)])


def test_web_cell_sizes(cosine):
    """The superweak-chaos web cell is about half the ordinary one."""
    weak = SystemParams.from_kappa(cosine, "0/1", 0.0, 0.6)
    orbit = sample_web(weak, PhasePoint(math.pi, 0.01), 20000, unfolded=True)
    assert np.ptp(orbit[:, 0]) > 4 * math.pi
    elliptic = SystemParams.from_kappa(cosine, "2/3", 0.0, 0.1)
    start = select_center(find_fixed_points(elliptic), (0.0, 0.0), kind="elliptic").point
    near = PhasePoint(start.u + 0.2, start.v)
    orbit = sample_web(elliptic, near, 100000, unfolded=True)
    assert np.ptp(orbit[:, 0]) < math.pi and np.ptp(orbit[:, 1]) < math.pi


def test_sample_web_matches_basic_map(generic_potential):
    params = SystemParams.from_kappa(generic_potential, "3/5", 0.2, 0.3)
    z = PhasePoint(0.4, -1.0)
    orbit = sample_web(params, z, 5, unfolded=True)
    u, v = basic_map_arrays(np.array(z.u), np.array(z.v), params, periods=5)
    assert np.allclose(orbit[-1], [u, v], atol=1e-12)


def test_spread_zero_without_kicks(cosine):
    params = SystemParams.from_kappa(cosine, "2/3", 0.0, 0.0)
    s = classical_spread(params, PhasePoint(0.1, 0.2), 200, 120)
    assert np.all(s.values == 0)
    with pytest.raises(ValueError):
        classical_spread(params, PhasePoint(0.0, 0.0), 10, 13)


def test_spread_deterministic_and_centered(golden_params):
    c = PhasePoint(1.5, 1.5)
    a = classical_spread(golden_params, c, 500, 240, seed=7)
    b = classical_spread(golden_params, c, 500, 240, seed=7)
    assert np.array_equal(a.values, b.values)
    centred = classical_spread(golden_params, c, 20000, 0, seed=1, reference="center")
    assert centred.values[0] == pytest.approx(golden_params.hbar, rel=0.02)
