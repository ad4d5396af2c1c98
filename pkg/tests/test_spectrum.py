import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import jv

from kickedhall.core import Potential, SystemParams
from kickedhall.errors import EigenFailure, TruncationTooSmall
from kickedhall.spectrum import (band_spectrum, brillouin_grid, certified_truncation, eigenphases,
                                 kick_fourier_coeffs, mkh_matrix, mr_matrix, qe_splitting,
                                 trace_symmetry_check, unitarity_error, width_gap_half)

from conftest import circular_distance

HALF = Fraction(1, 2)


def test_kick_coeffs_bessel(cosine):
    c = kick_fourier_coeffs(cosine, 0.0, 0.1, 20)
    for l in range(-5, 6):
        assert abs(c[l + 20] - 1j ** l * jv(l, 0.1)) < 1e-12


def test_kick_coeffs_trivial_and_parseval(generic_potential):
    c = kick_fourier_coeffs(generic_potential, 0.3, 0.0, 8)
    assert c[8] == pytest.approx(1.0) and np.max(np.abs(np.delete(c, 8))) < 1e-15
    c = kick_fourier_coeffs(generic_potential, 0.3, 0.7, 40)
    assert abs(np.sum(np.abs(c) ** 2) - 1) < 1e-12
    with pytest.raises(TruncationTooSmall):
        kick_fourier_coeffs(generic_potential, 0.3, 5.0, 3)


def test_certified_truncation(cosine):
    lt = certified_truncation(cosine, 0.1)
    small = kick_fourier_coeffs(cosine, 1.0, 0.1, lt)
    big = kick_fourier_coeffs(cosine, 1.0, 0.1, 2 * lt)
    assert np.max(np.abs(big[lt:3 * lt + 1] - small)) < 1e-15


def test_mkh_trivial_cases(generic_potential):
    p = SystemParams(generic_potential, "2/5", 0.4, Fraction(3, 7), 0.0)
    assert np.allclose(mkh_matrix(1, 0.3, 0.2, p), np.eye(7), atol=1e-14)
    assert np.allclose(mr_matrix(0.3, 0.2, p), np.eye(7), atol=1e-13)
    p1 = SystemParams(generic_potential, "2/5", 0.4, Fraction(2), 0.3)
    for j in range(p1.r // 2):
        sign = -1.0 if j % 2 else 1.0
        w1v = generic_potential.value(0.4 - (2 * j + 1) * p1.eta_angle - sign * 0.3)
        w2v = generic_potential.value(0.4 - 2 * j * p1.eta_angle - sign * 0.2)
        m = mkh_matrix(j, 0.3, 0.2, p1)
        assert m.shape == (1, 1)
        assert abs(m[0, 0] - np.exp(-1j * 0.3 * (w1v + w2v))) < 1e-14


def test_unitarity(generic_potential, rng):
    p = SystemParams(generic_potential, "3/7", 1.0, Fraction(2, 5), 0.4)
    w1, w2 = rng.uniform(0, 6, (2, 30))
    for j in range(p.r // 2):
        assert unitarity_error(mkh_matrix(j, w1, w2, p)) < 1e-12
    assert unitarity_error(mr_matrix(w1, w2, p)) < 1e-11


def test_half_det_and_pairing(generic_potential, rng):
    p = SystemParams(generic_potential, "3/5", 0.4, HALF, 0.3)
    w1, w2 = rng.uniform(0, 6, (2, 40))
    m = mr_matrix(w1, w2, p)
    assert np.max(np.abs(np.linalg.det(m) - 1)) < 1e-10
    e = eigenphases(m)
    assert np.max(np.abs(np.sin(e[:, 0] + e[:, 1]))) < 1e-10


def test_eta0_closed_form():
    rng = np.random.default_rng(2)
    for mu in (0.05, 0.1, 0.3):
        p = SystemParams(Potential.cosine(), "0/1", math.pi / 2, HALF, mu)
        w1, w2 = rng.uniform(0, 2 * math.pi, (2, 100))
        exact = 4 * np.arcsin(np.sin(mu * np.sin(w1)) * np.sin(mu * np.sin(w2)))
        assert np.max(np.abs(qe_splitting(p, w1, w2) - np.abs(exact))) < 1e-10


def test_period_one_in_hbar(generic_potential, rng):
    w1, w2 = rng.uniform(0, 1, (2, 10))
    for hs in (Fraction(1, 3), Fraction(2, 5)):
        a = SystemParams(generic_potential, "3/5", 0.2, hs, 0.2)
        b = a.replace(hbar_s=hs + 1)
        assert circular_distance(eigenphases(mr_matrix(w1, w2, a)),
                                 eigenphases(mr_matrix(w1, w2, b))) < 1e-10


def test_q_fold_degeneracy(generic_potential, rng):
    for hs in (Fraction(2, 3), Fraction(3, 5), Fraction(3, 4)):
        p = SystemParams(generic_potential, "2/5", 0.4, hs, 0.3)
        w1, w2 = rng.uniform(0, 2 * math.pi / hs.denominator, (2, 10))
        ref = eigenphases(mr_matrix(w1, w2, p))
        for dw1, dw2 in [(2 * math.pi / hs.denominator, 0), (0, 2 * math.pi / hs.denominator)]:
            moved = eigenphases(mr_matrix(w1 + dw1, w2 + dw2, p))
            assert max(circular_distance(a, b) for a, b in zip(ref, moved)) < 1e-10
        off = eigenphases(mr_matrix(w1, w2 + 2 * math.pi / hs.denominator ** 2, p))
        assert max(circular_distance(a, b) for a, b in zip(ref, off)) > 1e-3


def test_band_spectrum_structure(cosine):
    p = SystemParams(cosine, "2/3", 0.0, Fraction(2, 5), 0.1)
    bs = band_spectrum(p, (4, 3))
    assert bs.eigenphases.shape == (12, 5)
    assert np.all(np.diff(bs.eigenphases, axis=1) >= 0)
    assert np.all((bs.eigenphases > -math.pi) & (bs.eigenphases <= math.pi))
    assert len(bs.grid) == 12 and np.all(bs.multiplicities() >= 1)
    w1, w2 = brillouin_grid(Fraction(2, 5), 4, 3)
    assert w1.max() < 2 * math.pi * 2 / 5 and w2.max() < 2 * math.pi / 5
    zero = band_spectrum(p.replace(mu=0.0), (2, 2))
    assert np.max(np.abs(zero.eigenphases)) < 1e-12


def test_eigen_failure_reports_w(monkeypatch):
    def broken(m):
        lam, vec = np.linalg.eigh(np.eye(m.shape[-1]))
        return lam + 0j, vec + 0j
    monkeypatch.setattr("kickedhall.spectrum.np.linalg.eig", broken)
    with pytest.raises(EigenFailure) as info:
        eigenphases(np.diag([1.0, 1j]), w=(0.1, 0.2))
    assert info.value.w == (0.1, 0.2)


def test_qar_flat(cosine, rng):
    for eta, hs in [("2/3", 1), ("3/5", 2), ("8/13", 1)]:
        p = SystemParams(cosine, eta, 0.7, Fraction(hs), 0.1)
        e = band_spectrum(p, w1=rng.uniform(0, 2 * math.pi * hs, 25), w2=rng.uniform(0, 2 * math.pi, 25)).eigenphases
        assert np.ptp(e) < 1e-10
    weak = SystemParams(cosine, "1/4", 0.7, Fraction(1), 0.1)
    e = band_spectrum(weak, (5, 5)).eigenphases
    assert np.ptp(e) > 1e-3


@pytest.mark.parametrize("eta, mu", [("2/3", 0.1), ("3/5", 0.3)])
def test_trace_symmetry(cosine, eta, mu):
    assert trace_symmetry_check(SystemParams(cosine, eta, 0.0, HALF, mu), 100) < 1e-11


def test_trace_symmetry_trivial(cosine):
    assert trace_symmetry_check(SystemParams(cosine, "2/3", 0.0, HALF, 0.0), 10) == 0.0


def test_width_gap_eta0():
    p = SystemParams(Potential.cosine(), "0/1", math.pi / 2, HALF, 0.1)
    wg = width_gap_half(p)
    assert abs(wg.width - 4 * math.asin(math.sin(0.1) ** 2)) < 1e-10
    assert abs(wg.gap) < 1e-10


@settings(max_examples=15, deadline=None)
@given(st.floats(0.0, 2 * math.pi), st.floats(0.0, 2 * math.pi))
def test_splitting_bounded_by_width(w1, w2):
    p = SystemParams(Potential.cosine(), "2/3", 0.0, HALF, 0.1)
    wg = width_gap_half(p, scan=8)
    d = float(qe_splitting(p, w1, w2))
    assert wg.gap - 1e-12 <= d <= wg.width + 1e-12
