"""Polynomial potentials F(u) and the geometry of their sublevel sets on u >= 0.

Coefficients are kept twice: as floats for evaluation and as exact
``Fraction`` values for the equality decisions the classification hinges on
(vanishing derivatives at the origin, multiple roots of ``F - h``).
"""

from __future__ import annotations

import json
import math
import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from scipy.optimize import brentq

TOL_ROOT = 1e-12
TOL_ENERGY = 1e-10


class DegeneratePolynomialError(ValueError):
    """The zero polynomial vanishes on the whole interval."""


def to_fraction(x) -> Fraction:
    """Exact rational value of ``x``; floats are read through their shortest repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("boolean is not a coefficient")
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, numbers.Real) and not isinstance(x, numbers.Rational):
        x = float(x)
        if not math.isfinite(x):
            raise ValueError(f"non-finite coefficient {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, numbers.Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    return Fraction(x)


# --- coefficient-sequence helpers (index i holds the u**i coefficient) ----------


def trim(coeffs: Sequence) -> list:
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def derivative(coeffs: Sequence, order: int = 1) -> list:
    c = list(coeffs)
    for _ in range(order):
        if len(c) <= 1:
            return [type(c[0])(0) if c else 0.0]
        c = [i * c[i] for i in range(1, len(c))]
    return c


def horner(coeffs: Sequence, x):
    acc = coeffs[-1]
    for a in reversed(coeffs[:-1]):
        acc = acc * x + a
    return acc


def taylor_shift(coeffs: Sequence, a) -> list:
    """Coefficients of p(a + x) in powers of x (repeated synthetic division)."""
    c = list(coeffs)
    n = len(c)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] = c[j] + a * c[j + 1]
    return c


def deflate(coeffs: Sequence, times: int = 1) -> list:
    """Drop the constant term(s): (p(x) - p(0)) / x, applied ``times`` times."""
    c = list(coeffs)
    for _ in range(times):
        c = c[1:] if len(c) > 1 else [c[0] * 0]
    return c


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    num = list(num)
    den = trim(den)
    if len(den) == 1 and den[0] == 0:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    while len(trim(num)) >= len(den) and not (len(num) == 1 and num[0] == 0):
        num = trim(num)
        shift = len(num) - len(den)
        if shift < 0:
            break
        factor = num[-1] / den[-1]
        q[shift] = factor
        for i, d in enumerate(den):
            num[i + shift] -= factor * d
        num.pop()
        if not num:
            num = [Fraction(0)]
    return q, trim(num) if num else [Fraction(0)]


def poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    """Monic gcd of two exact polynomials."""
    a, b = trim(a), trim(b)
    while not (len(b) == 1 and b[0] == 0):
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if len(a) == 1 and a[0] == 0:
        return a
    lead = a[-1]
    return [x / lead for x in a]


def cauchy_bound(coeffs: Sequence[float]) -> float:
    """All real roots of the polynomial lie in [-B, B]."""
    c = trim([float(x) for x in coeffs])
    if len(c) == 1:
        return 0.0
    lead = abs(c[-1])
    return 1.0 + max(abs(x) / lead for x in c[:-1])


# --- root isolation ---------------------------------------------------------


class Root(NamedTuple):
    location: float
    multiplicity: int


def real_roots(coeffs: Sequence[float], lo: float, hi: float, tol: float = TOL_ROOT) -> list[Root]:
    """All real roots of a float polynomial in [lo, hi].

    Isolation recurses on the derivative: between consecutive roots of p' the
    polynomial is monotone and holds at most one sign change, bracketed and
    polished with Brent's method.  Critical points where |p| is below the
    root tolerance are reported as multiple roots.
    """
    c = trim([float(x) for x in coeffs])
    if len(c) == 1:
        if c[0] == 0.0:
            raise DegeneratePolynomialError("zero polynomial: every point is a root")
        return []
    scale = max(abs(x) for x in c) * max(1.0, abs(lo), abs(hi)) ** (len(c) - 1)
    return _roots_rec(c, lo, hi, tol * scale)


def _roots_rec(c: list[float], lo: float, hi: float, atol: float) -> list[Root]:
    if len(c) == 1:
        return []
    if len(c) == 2:
        r = -c[0] / c[1]
        return [Root(r, 1)] if lo <= r <= hi else []
    crit = _roots_rec(derivative(c), lo, hi, atol * (len(c) - 1))
    return _roots_from_critical(c, lo, hi, atol, crit, lambda x: horner(c, x))


def _roots_from_critical(c, lo, hi, atol, crit, value, zero_at=None) -> list[Root]:
    """Shared sweep over monotone segments; ``zero_at`` overrides the zero test."""
    if zero_at is None:
        zero_at = lambda x, fx: abs(fx) <= atol  # noqa: E731
    pts = [lo] + [r.location for r in crit if lo < r.location < hi] + [hi]
    vals = [value(x) for x in pts]
    zero = [zero_at(x, fx) for x, fx in zip(pts, vals)]
    out: list[Root] = []
    for i, x in enumerate(pts):
        if zero[i]:
            out.append(Root(x, _multiplicity(c, x, atol)))
        if i + 1 < len(pts):
            a, b = x, pts[i + 1]
            fa, fb = vals[i], vals[i + 1]
            if zero[i] or zero[i + 1] or fa * fb > 0:
                continue
            fn = lambda t: horner(c, t)  # noqa: E731
            out.append(Root(brentq(fn, a, b, xtol=1e-300, rtol=1e-15, maxiter=200), 1))
    # a critical point shared by the root list of p' may coincide with lo/hi
    out.sort()
    merged: list[Root] = []
    for r in out:
        if merged and abs(r.location - merged[-1].location) <= 1e-14 * max(1.0, abs(r.location)):
            if r.multiplicity > merged[-1].multiplicity:
                merged[-1] = r
            continue
        merged.append(r)
    return merged


def _multiplicity(c: list[float], x: float, atol: float) -> int:
    d = list(c)
    n = 0
    fact = 1.0
    while len(d) > 1 and abs(horner(d, x)) <= atol * fact:
        n += 1
        d = derivative(d)
        fact *= n
    return max(n, 1)


# --- the potential ----------------------------------------------------------


class CriticalPoint(NamedTuple):
    location: float
    value: float
    vanish_order: int
    kind: str  # 'local-min' | 'local-max' | 'inflection'


@dataclass(frozen=True)
class EndpointDiag:
    at: float
    endpoint_class: str  # 'regular' | 'critical'
    zero_contact: str = "none"  # 'none' | 'finite-slope' | 'zero-slope' | 'infinite-slope'
    finite_time: bool = True
    slope: float | None = None  # a = sqrt(-2 F'(0)) for finite-slope contacts


@dataclass(frozen=True)
class BranchInterval:
    kind: str  # 'interior' | 'from-zero'
    left_end: float
    right_end: float
    left_diag: EndpointDiag
    right_diag: EndpointDiag

    @property
    def bounds(self) -> tuple[float, float]:
        return (self.left_end, self.right_end)


@dataclass(frozen=True)
class Potential:
    """F(u) = sum c_i u**i with nonzero leading coefficient and degree >= 1."""

    coeffs: tuple[float, ...]
    exact: tuple[Fraction, ...] = field(default=(), repr=False, compare=False)

    def __init__(self, coeffs: Iterable, exact: Iterable | None = None):
        raw = list(coeffs)
        if exact is None:
            ex = [to_fraction(x) for x in raw]
        else:
            ex = [to_fraction(x) for x in exact]
        ex = trim(ex)
        if len(ex) < 2:
            raise ValueError("constant potential: the equation degenerates (degree must be >= 1)")
        object.__setattr__(self, "exact", tuple(ex))
        object.__setattr__(self, "coeffs", tuple(float(x) for x in ex))

    # construction ---------------------------------------------------------

    @classmethod
    def from_json(cls, obj) -> "Potential":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, dict) or "coeffs" not in obj:
            raise ValueError('potential JSON must be an object {"coeffs": [c0, c1, ...]}')
        return cls(obj["coeffs"])

    def to_json(self) -> dict:
        return {"coeffs": [str(x) if x.denominator != 1 else int(x) for x in self.exact]}

    def scaled(self, lam) -> "Potential":
        lam = to_fraction(lam)
        return Potential([lam * x for x in self.exact])

    def shifted(self, h) -> list[Fraction]:
        """Exact coefficients of F - h."""
        c = list(self.exact)
        c[0] -= to_fraction(h)
        return c

    # calculus -------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def h0(self) -> float:
        return self.coeffs[0]

    def deriv(self, order: int = 1) -> tuple[float, ...]:
        return tuple(derivative(self.coeffs, order))

    def eval(self, u, order: int = 0):
        if order > self.degree + 1:
            raise ValueError("derivative order exceeds degree + 1")
        if order == 0:
            return horner(self.coeffs, u)
        return horner(derivative(self.coeffs, order), u)

    __call__ = eval

    def derivative_at_zero(self, order: int) -> Fraction:
        """Exact F^(n)(0) = n! c_n."""
        if order >= len(self.exact):
            return Fraction(0)
        return self.exact[order] * math.factorial(order)

    def vanish_order_at_zero(self) -> int:
        """Lowest n >= 1 with F^(n)(0) != 0 (exact coefficient read-off)."""
        for n in range(1, len(self.exact)):
            if self.exact[n] != 0:
                return n
        raise AssertionError("unreachable: degree >= 1")

    def scale(self, u: float = 1.0) -> float:
        return max(abs(x) for x in self.coeffs) * max(1.0, abs(u)) ** self.degree

    # roots and extrema ----------------------------------------------------

    @cached_property
    def _critical_roots(self) -> tuple[Root, ...]:
        lim = cauchy_bound(self.deriv()) + 1.0
        return tuple(_roots_rec(list(self.deriv()), -lim, lim, TOL_ROOT * self._crit_scale(lim)))

    def _crit_scale(self, lim: float) -> float:
        d = self.deriv()
        return max(abs(x) for x in d) * max(1.0, lim) ** max(len(d) - 1, 0)

    def critical_points(self, lo: float = -math.inf, hi: float = math.inf) -> list[CriticalPoint]:
        if self.degree == 1:
            return []
        out = []
        for r in self._critical_roots:
            if lo <= r.location <= hi:
                out.append(self._describe_critical(r))
        return out

    def _describe_critical(self, r: Root) -> CriticalPoint:
        p = r.location
        n = r.multiplicity + 1  # F' vanishes to order r.multiplicity
        if n >= len(self.coeffs):
            n = self.degree
        dn = self.eval(p, n)
        if n % 2 == 1:
            kind = "inflection"
        else:
            kind = "local-min" if dn > 0 else "local-max"
        return CriticalPoint(p, self.eval(p), n, kind)

    def roots_shifted(self, h, lo: float, hi: float) -> list[Root]:
        """Roots of F(u) = h in [lo, hi] with multiplicities.

        When ``h`` is exact (int, Fraction, decimal string, or exactly F(0)) the
        multiple-root decisions are made in rational arithmetic.
        """
        lo, hi = float(lo), float(hi)
        if not lo < hi:
            raise ValueError("need lo < hi")
        h_exact = self._exact_level(h)
        c = [float(x) for x in self.shifted(h_exact)] if h_exact is not None else list(self.coeffs)
        if h_exact is None:
            c[0] -= float(h)
        c = trim(c)
        if len(c) == 1:
            if c[0] == 0.0:
                raise DegeneratePolynomialError("F is identically equal to h")
            return []
        atol = TOL_ROOT * self.scale(max(abs(lo), abs(hi)))
        crit = [r for r in self._critical_roots]
        if h_exact is None:
            return _roots_from_critical(c, lo, hi, atol, crit, lambda x: horner(c, x))
        return self._exact_roots(h_exact, c, lo, hi, atol, crit)

    def _exact_level(self, h) -> Fraction | None:
        if isinstance(h, (Fraction, int, str)) and not isinstance(h, bool):
            return to_fraction(h)
        if isinstance(h, float) and h == self.coeffs[0]:
            return self.exact[0]
        return None

    def _exact_roots(self, h_exact, c, lo, hi, atol, crit) -> list[Root]:
        q = trim(self.shifted(h_exact))
        chain = _gcd_chain(q)
        if not chain:
            return _roots_from_critical(c, lo, hi, atol, crit, lambda x: horner(c, x))
        g_roots = [real_roots([float(x) for x in g], min(lo, -1.0) - cauchy_bound([float(x) for x in g]),
                              max(hi, 1.0) + cauchy_bound([float(x) for x in g])) for g in chain]

        def mult_exact(x: float) -> int:
            m = 1
            for rts in g_roots:
                if any(abs(r.location - x) <= 1e-7 * max(1.0, abs(x)) for r in rts):
                    m += 1
                else:
                    break
            return m

        def is_zero(x: float, fx: float) -> bool:
            return mult_exact(x) >= 2 or horner(q, Fraction(x)) == 0

        def value(x: float) -> float:
            if mult_exact(x) >= 2:
                return 0.0
            v = horner(q, Fraction(x))
            return float(v) if v != 0 else 0.0

        roots = _roots_from_critical(c, lo, hi, atol, crit, value, zero_at=is_zero)
        return [Root(r.location, max(r.multiplicity, mult_exact(r.location))) if r.multiplicity > 1
                or mult_exact(r.location) > 1 else r for r in roots]

    def extrema(self, lo: float, hi: float) -> list[CriticalPoint]:
        if not lo < hi:
            raise ValueError("need lo < hi")
        return self.critical_points(lo, hi)

    def default_u_max(self, h: float) -> float:
        c = list(self.coeffs)
        c[0] -= float(h)
        b1 = cauchy_bound(self.deriv()) if self.degree > 1 else 0.0
        return 1.0 + max(b1, cauchy_bound(c))

    # sublevel geometry ----------------------------------------------------

    def is_h0(self, h) -> bool:
        h_exact = self._exact_level(h)
        if h_exact is not None:
            return h_exact == self.exact[0]
        return abs(float(h) - self.h0) <= TOL_ENERGY * max(1.0, abs(self.h0))

    def admissible_intervals(self, h, u_max: float | None = None) -> list[BranchInterval]:
        """Maximal intervals of [0, u_max] carrying bounded branches at level h."""
        if u_max is None:
            u_max = self.default_u_max(float(h))
        if u_max <= 0:
            raise ValueError("u_max must be positive")
        at_h0 = self.is_h0(h)
        if at_h0:
            h = self.exact[0]
        roots = self.roots_shifted(h, 0.0, u_max)
        pts = [0.0] + [r.location for r in roots if 0.0 < r.location < u_max] + [u_max]
        mult = {r.location: r.multiplicity for r in roots}
        hf = float(h)
        out = []
        for a, b in zip(pts[:-1], pts[1:]):
            mid = 0.5 * (a + b)
            if self.eval(mid) - hf >= 0:
                continue
            if b == u_max and b not in mult:
                continue  # unbounded in u
            if a == 0.0 and not (at_h0 or self.h0 < hf):
                continue
            right = EndpointDiag(b, "critical" if mult.get(b, 1) >= 2 else "regular",
                                 finite_time=mult.get(b, 1) < 2)
            if a == 0.0:
                left = self._zero_diag(h, at_h0)
                out.append(BranchInterval("from-zero", 0.0, b, left, right))
            else:
                left = EndpointDiag(a, "critical" if mult.get(a, 1) >= 2 else "regular",
                                    finite_time=mult.get(a, 1) < 2)
                out.append(BranchInterval("interior", a, b, left, right))
        return out

    def _zero_diag(self, h, at_h0: bool) -> EndpointDiag:
        cls = "critical" if self.exact[1] == 0 else "regular"
        if not at_h0:
            return EndpointDiag(0.0, cls, "infinite-slope", True)
        if self.exact[1] < 0:
            a = math.sqrt(-2.0 * self.coeffs[1])
            return EndpointDiag(0.0, cls, "finite-slope", True, a)
        return EndpointDiag(0.0, cls, "zero-slope", self.vanish_order_at_zero() <= 2, 0.0)


def _gcd_chain(q: list[Fraction]) -> list[list[Fraction]]:
    """[gcd(q, q'), gcd(q, q', q''), ...] while nonconstant."""
    out = []
    g = list(q)
    d = list(q)
    while True:
        d = derivative(d)
        if len(trim(d)) == 1 and trim(d)[0] == 0:
            break
        g = poly_gcd(g, d)
        if len(g) < 2:
            break
        out.append(g)
    return out
