import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kickedhall.core import (Potential, SystemParams, as_fraction, derive_resonance,
                             eval_force, eval_potential, is_strong_swc, is_swc)
from kickedhall.errors import ConfigError


@pytest.mark.parametrize("eta, lp, r", [
    ("2/3", 3, 12), ("3/5", 5, 20), ("8/13", 13, 52), ("0/1", 1, 4),
    ("1/4", 1, 4), ("1/8", 2, 8), ("1/2", 1, 4), ("4/3", 3, 12),
])
def test_derive_resonance(eta, lp, r):
    res = derive_resonance(as_fraction(eta))
    assert (res.l_prime, res.r) == (lp, r)
    assert res.r == 4 * res.l_prime
    assert Fraction(res.n_prime, res.l_prime) == Fraction(4, res.l)


def test_swc_predicates(cosine):
    assert is_swc(SystemParams(cosine, "2/3"))
    assert not is_swc(SystemParams(cosine, "1/4"))
    assert is_swc(SystemParams(cosine, "1/8"))
    assert not is_strong_swc(SystemParams(cosine, "1/8"))
    two = Potential((0.5, 0.2))
    assert not is_swc(SystemParams(two, "1/8"))
    assert is_swc(SystemParams(two, "2/3"))


def test_cosine_values(cosine):
    x = np.linspace(-4, 4, 17)
    assert np.allclose(eval_potential(cosine, x), -np.cos(x), atol=1e-15)
    assert np.allclose(eval_force(cosine, x), -np.sin(x), atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=1, max_size=3)
       .filter(lambda c: abs(complex(*c[-1])) > 1e-3),
       st.floats(-10, 10))
def test_force_is_minus_derivative(coeffs, x):
    pot = Potential(tuple(complex(a, b) for a, b in coeffs))
    h = 1e-5
    fd = -(pot.value(x + h) - pot.value(x - h)) / (2 * h)
    assert abs(pot.force(x) - fd) < 1e-7


@settings(max_examples=40, deadline=None)
@given(st.integers(-50, 50), st.integers(1, 60))
def test_fraction_roundtrip(k, l):
    f = Fraction(k, l)
    p = SystemParams(Potential.cosine(), f, 0.3, Fraction(2, 7), 0.2)
    assert SystemParams.from_dict(p.to_dict()) == p


def test_bad_inputs(cosine):
    with pytest.raises(ConfigError):
        as_fraction("two thirds")
    with pytest.raises(ConfigError):
        SystemParams(cosine, "2/3", mu=-1.0)
    with pytest.raises(ConfigError):
        Potential((1.0, 0.0))
    with pytest.raises(ConfigError):
        SystemParams(cosine, "2/3", hbar_s=0.3).hbar_fraction


def test_kappa_relation(cosine):
    p = SystemParams.from_kappa(cosine, "2/3", 0.0, 0.25)
    assert math.isclose(p.kappa, 0.25) and math.isclose(p.hbar, 1.0)
