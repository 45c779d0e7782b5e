from fractions import Fraction

import numpy as np
import pytest

from travwave import models
from travwave.models import (
    CHParams,
    GCHParams,
    MASEParams,
    ch_case,
    ch_extrema,
    ch_reduce,
    ch_reduction,
    gch_conjecture_scan,
    gch_reduce,
    mase_case,
    mase_reduce,
    original_potential,
    reproduce_table,
    unflip_profile,
)
from travwave.profile import build_peaked_solitary


def test_ch_reduce_example():
    p = CHParams(-1, 0, 0)
    assert (p.A, p.B) == (Fraction(-1, 2), 1)
    F = ch_reduce(p)
    assert F.exact == (0, Fraction(-1, 2), 1, Fraction(-1, 2))
    for w in (0.3, 1.7, -2.0):
        assert F.eval(w) == pytest.approx(-(w / 2) * (w - 1) ** 2, abs=1e-14)


def _gch_rhs(a, c, kappa, r, w):
    """Non-derivative terms of the integrated GCH/CH wave equation in u = w + c."""
    u = w + c
    return r + (c - 2 * kappa) * u - (a / 2) * u * u


@pytest.mark.parametrize("c,kappa,r", [(-1, 0, 0), (0.5, -1, 2), (2, 1, -1), (-3, 0.25, 0.5)])
def test_ch_reduction_soundness(c, kappa, r):
    red = ch_reduction(CHParams(c, kappa, r))
    F = original_potential(red)
    ws = np.random.default_rng(42).uniform(-3, 3, 100)
    for w in ws:
        assert F.eval(w, 1) == pytest.approx(_gch_rhs(3, c, kappa, r, w), rel=1e-12, abs=1e-12)
    # the normalized potential satisfies F_hat'(w) = F'(-w)
    for w in ws[:10]:
        assert red.potential.eval(w, 1) == pytest.approx(F.eval(-w, 1) if red.flipped else F.eval(w, 1), rel=1e-12)
    assert red.potential.exact[2] >= 0


@pytest.mark.parametrize("a,c,kappa,r", [(-2, 1, 0, 1), (0, -2, 1, 0), (3, -1, 0, 0), (1.5, 2, -1, -1)])
def test_gch_reduction_soundness(a, c, kappa, r):
    F = gch_reduce(GCHParams(a, c, kappa, r), normalize=False)
    for w in np.random.default_rng(1).uniform(-3, 3, 100):
        assert F.eval(w, 1) == pytest.approx(_gch_rhs(a, c, kappa, r, w), rel=1e-12, abs=1e-12)


def test_gch_with_a3_is_ch():
    assert gch_reduce(GCHParams(3, -1, 0, 0)).exact == ch_reduce(CHParams(-1, 0, 0)).exact


def test_gch_a0_is_quadratic():
    F = gch_reduce(GCHParams(0, 1, 0, 0))
    assert F.degree == 2


def test_mase_reduce_example():
    p = MASEParams(1, 0)
    assert p.d == Fraction(1, 7)
    F = mase_reduce(p)
    assert F.degree == 5 and F.exact[0] == 0
    assert F.exact[1] == Fraction(3, 49) + Fraction(2, 343) + Fraction(3, 2401)
    G = lambda u: 0 + 0 * u + 3 * u ** 2 - 2 * u ** 3 + 3 * u ** 4
    for w in np.random.default_rng(42).uniform(-2, 2, 100):
        assert F.eval(w, 1) == pytest.approx(G(w - 1 / 7), rel=1e-12, abs=1e-13)


def test_ch_case_examples():
    assert ch_case(Fraction(-1, 2), 1) == "iv"
    assert ch_case(1, 0) == "i"
    assert ch_case(-1, 1) == "vi"
    assert ch_case(0, 1) == "ii"
    with pytest.raises(ValueError):
        ch_case(0, -1)


@pytest.mark.parametrize("case", sorted(models.CH_SAMPLES))
def test_ch_extrema_identity(case):
    A, B = models.CH_SAMPLES[case]
    ext = ch_extrema(A, B)
    if ext is None:
        assert models.ch_potential(A, B).critical_points() == []
        return
    cps = sorted(cp.location for cp in models.ch_potential(A, B).critical_points())
    assert cps == pytest.approx(list(ext), abs=1e-12)


def test_table_examples():
    rows = {r.label: r.tags for r in reproduce_table("ch", CHParams(-1, 0, 0))}
    assert "peaked-solitary" in rows["h=h0=h2"]
    rows = {r.label: r.tags for r in reproduce_table("ch", models.CH_SAMPLES["ii"])}
    assert "constant" in rows["h=h0=h1"]
    assert rows["h0=h1<h<h2"] == ["cusped-periodic"]
    assert "cusped-solitary" in rows["h=h2"]


def test_mase_case_search_covers_all_cases():
    found = models.mase_case_search()
    assert set(found) == set(models.MASE_CASES)
    for case, p in found.items():
        assert mase_case(p, tol=1e-10) == case


def test_conjecture_scan_and_control():
    res = gch_conjecture_scan()
    assert res.hits == [] and res.certified
    assert all(p.params.a <= 0 for p in res.points)
    ctrl = gch_conjecture_scan(points=[GCHParams(3, -1, 0, 0)])
    assert len(ctrl.hits) == 1


def test_unflip_profile():
    red = ch_reduction(CHParams(1, 0, 0))  # B = -1 < 0, so the potential is flipped
    assert red.flipped
    assert red.level(Fraction(1, 3)) == Fraction(-1, 3)
    F = red.potential
    # F_hat = w/2 + w^2 ... build any profile on F_hat and map it back
    G = models.ch_potential(Fraction(-1, 2), 1)
    prof = build_peaked_solitary(G)
    fake = models.Reduction(G, True, "ch", red.params)
    back = unflip_profile(prof, fake)
    assert np.array_equal(back.u, -prof.u)
    assert back.potential.exact == (0, Fraction(-1, 2), -1, Fraction(-1, 2))
    # first integral is preserved with h -> -h in the original orientation
    H = back.u * back.dudt ** 2 / 2 + np.polynomial.polynomial.polyval(back.u, back.potential.coeffs)
    assert np.max(np.abs(H - back.energy)) <= 1e-10
    assert F.exact[2] >= 0
