"""Branch speeds and singular-endpoint time-of-flight integrals.

Along a level set H = u v^2/2 + F(u) = h the time spent between two u values
is the integral of du / |v_h(u)| with |v_h(u)| = sqrt(2 (h - F(u)) / u).  The
integrand is singular at turning points (F(m) = h) and at the singular line
u = 0.  Each endpoint type gets an algebraic change of variable that leaves a
smooth integrand:

========================  =====================  ===========================
endpoint                  substitution           regularized dt/ds
========================  =====================  ===========================
u = 0, h = F(0), F'(0)<0  u = s^2                2 s / sqrt(2 D(s^2))
u = 0, h = F(0), F'(0)=0  u = s^2                2 / sqrt(2 E(s^2))
u = 0, h > F(0)           u = s^2                2 s^2 / sqrt(2 P(s^2))
turning point, F'(m)!=0   u = m -+ s^2           2 sqrt(u / (2 Q(s^2)))
turning point, F'(m)=0    u = m -+ exp(-s)       sqrt(u / (2 R(exp(-s))))
========================  =====================  ===========================

where P = h - F, D = P/u, E = D/u, Q = P/(m-u), R = P/(m-u)^2, all obtained
by synthetic division so no cancellation occurs near the endpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ._backend import kernels
from .potential import TOL_ROOT, BranchInterval, Potential, deflate, taylor_shift, to_fraction

MAP_ID, MAP_SQ, MAP_EXP = 0, 1, 2
DEFAULT_TOL = 1e-10
MAX_PANELS = 10_000


class BranchDomainError(ValueError):
    """Evaluation point lies outside the branch (h - F(u) < 0)."""


@dataclass(frozen=True)
class SpeedBranch:
    potential: Potential
    h: float
    sign: int = 1
    deflated: tuple[float, ...] | None = None

    @classmethod
    def make(cls, F: Potential, h, sign: int = 1) -> "SpeedBranch":
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if F.is_h0(h):
            d = tuple(float(x) for x in deflate([-x for x in F.shifted(F.exact[0])]))
            return cls(F, F.h0, sign, d)
        return cls(F, float(h), sign, None)

    @property
    def at_h0(self) -> bool:
        return self.deflated is not None


@dataclass(frozen=True)
class TransitResult:
    value: float
    converged: bool
    estimated_error: float

    @property
    def infinite(self) -> bool:
        return math.isinf(self.value)


def speed(b: SpeedBranch, u: float) -> float:
    """Signed v_h(u); the u = 0 limit at h = F(0) comes from the deflated polynomial.

    At u = 0 with h > F(0) the branch is unbounded and +-inf is returned.
    """
    F = b.potential
    if u < 0:
        raise BranchDomainError("u must be non-negative")
    if b.deflated is not None:
        v2 = 2.0 * float(np.polynomial.polynomial.polyval(u, b.deflated))
        tol = 1e-12 * F.scale(u)
    else:
        if u == 0.0:
            if b.h < F.h0:
                raise BranchDomainError("h < F(0): the branch does not reach u = 0")
            return b.sign * math.inf
        v2 = 2.0 * (b.h - F.eval(u)) / u
        tol = 1e-12 * F.scale(u) / u
    if v2 < 0:
        if v2 < -tol:
            raise BranchDomainError(f"h - F(u) < 0 at u = {u!r}")
        v2 = 0.0
    return b.sign * math.sqrt(v2)


def finite_time_convergent(F: Potential, endpoint: Union[str, float]) -> bool:
    """Convergence of the arrival-time integral at an endpoint of the h = F(0) level.

    ``endpoint='zero'``: true iff the lowest nonvanishing derivative order of F
    at 0 is at most 2.  A number m means the turning point m, true iff F'(m) > 0.
    """
    if isinstance(endpoint, str):
        if endpoint != "zero":
            raise ValueError("endpoint must be 'zero' or a turning point location")
        return F.vanish_order_at_zero() <= 2
    m = float(endpoint)
    return F.eval(m, 1) > _crit_tol(F, m)


def _crit_tol(F: Potential, m: float) -> float:
    return 1e-8 * F.scale(m)


# --- endpoint maps ----------------------------------------------------------


@dataclass(frozen=True)
class EndMap:
    """Change of variable u = u_end + direction * x(s) near one endpoint.

    ``dtds(s)`` is the regularized integrand; ``dudt(s)`` the speed magnitude.
    """

    kind: int
    k: int
    jac: float
    n0: tuple[float, ...]
    dn: tuple[float, ...]
    u_end: float
    direction: int
    label: str

    def x(self, s):
        s = np.asarray(s, dtype=float)
        if self.kind == MAP_ID:
            return s
        if self.kind == MAP_SQ:
            return s * s
        return np.exp(-s)

    def u(self, s):
        return self.u_end + self.direction * self.x(s)

    def s_of_u(self, u):
        d = np.abs(np.asarray(u, dtype=float) - self.u_end)
        if self.kind == MAP_ID:
            return d
        if self.kind == MAP_SQ:
            return np.sqrt(d)
        with np.errstate(divide="ignore"):
            return -np.log(d)

    def dtds(self, s):
        return kernels.integrand(self.kind, self.k, self.jac, self.n0, self.dn, np.asarray(s, float))

    def dudt(self, s):
        """|du/dt| at s, finite limits included (inf at a cusp)."""
        s = np.asarray(s, dtype=float)
        x = self.x(s)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.sqrt(2.0 * kernels.polyval(self.dn, x) / kernels.polyval(self.n0, x))
            if self.kind == MAP_SQ:
                # |du/dt| = (2 s) / (J s^k sqrt(N0/2Dn)) = s^(1-k) sqrt(2Dn/N0)
                if self.k == 1:
                    return r
                if self.k == 0:
                    return s * r
                return r / s
            if self.kind == MAP_EXP:
                return x * r
            return r * np.sqrt(x) ** (-self.k) if self.k else r

    def integrate(self, sa: float, sb: float, tol: float = DEFAULT_TOL) -> TransitResult:
        v, e, n = kernels.adaptive(self.kind, self.k, self.jac, self.n0, self.dn,
                                   float(sa), float(sb), tol, MAX_PANELS)
        ok = bool(e <= tol * max(1.0, abs(v))) and math.isfinite(v)
        return TransitResult(v, ok, e)

    def cumulative(self, nodes, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, bool]:
        """Times at each node measured from nodes[0]."""
        vals, errs, ok = kernels.cells(self.kind, self.k, self.jac, self.n0, self.dn,
                                       np.asarray(nodes, float), tol, MAX_PANELS)
        return np.concatenate([[0.0], np.cumsum(vals)]), bool(ok) and bool(np.all(np.isfinite(vals)))


def _shifted_gap(F: Potential, h: float, m: float, direction: int) -> list[float]:
    """Coefficients in x of h - F(m + direction*x)."""
    c = taylor_shift(list(F.coeffs), m)
    q = [-(ci * direction ** i) for i, ci in enumerate(c)]
    q[0] += h
    return q


def zero_map(F: Potential, h) -> EndMap:
    """Map at the singular-line end u = 0 of a from-zero branch."""
    if F.is_h0(h):
        gap = [-x for x in F.shifted(F.exact[0])]  # h0 - F(u), exact, zero constant term
        n = F.vanish_order_at_zero()
        if F.exact[n] > 0:
            raise BranchDomainError("F > F(0) near 0: no branch reaches the singular line")
        if n == 1:
            return EndMap(MAP_SQ, 1, 2.0, (1.0,), tuple(float(x) for x in deflate(gap, 1)), 0.0, 1, "zero-peak")
        if n == 2:
            return EndMap(MAP_SQ, 0, 2.0, (1.0,), tuple(float(x) for x in deflate(gap, 2)), 0.0, 1, "zero-contact")
        return EndMap(MAP_EXP, 0, 1.0, (1.0,), tuple(float(x) for x in deflate(gap, 2)), 0.0, 1, "zero-divergent")
    hf = float(h)
    if hf < F.h0:
        raise BranchDomainError("h < F(0): branch does not reach the singular line")
    gap = [-x for x in F.coeffs]
    gap[0] += hf
    return EndMap(MAP_SQ, 2, 2.0, (1.0,), tuple(gap), 0.0, 1, "zero-cusp")


def turning_map(F: Potential, h: float, m: float, side: str, critical: bool | None = None) -> EndMap:
    """Map at a turning point m; ``side`` is 'left' (u >= m) or 'right' (u <= m)."""
    direction = 1 if side == "left" else -1
    if critical is None:
        critical = abs(F.eval(m, 1)) <= _crit_tol(F, m)
    q = _shifted_gap(F, float(h), m, direction)
    n0 = (m, float(direction))
    if critical:
        return EndMap(MAP_EXP, 0, 1.0, n0, tuple(deflate(q, 2)), m, direction, "critical")
    return EndMap(MAP_SQ, 0, 2.0, n0, tuple(deflate(q, 1)), m, direction, "turn")


def plain_map(F: Potential, h: float) -> EndMap:
    gap = [-x for x in F.coeffs]
    gap[0] += float(h)
    return EndMap(MAP_ID, 1, 1.0, (1.0,), tuple(gap), 0.0, 1, "plain")


def _is_divergent(em: EndMap) -> bool:
    return em.kind == MAP_EXP


def _end_map(b: SpeedBranch, u_end: float, side: str, interval: BranchInterval | None) -> EndMap | None:
    F = b.potential
    h = b.h
    if interval is not None:
        diag = interval.left_diag if side == "left" else interval.right_diag
        if abs(diag.at - u_end) <= 1e-14 * max(1.0, abs(u_end)):
            if side == "left" and interval.kind == "from-zero":
                return zero_map(F, F.exact[0] if b.at_h0 else h)
            return turning_map(F, h, u_end, side, diag.endpoint_class == "critical")
        return None
    if side == "left" and u_end == 0.0:
        return zero_map(F, F.exact[0] if b.at_h0 else h)
    if abs(F.eval(u_end) - h) <= 1e3 * TOL_ROOT * F.scale(u_end):
        return turning_map(F, h, u_end, side)
    return None


def transit_time(b: SpeedBranch, u_a: float, u_b: float, tol: float = DEFAULT_TOL,
                 interval: BranchInterval | None = None) -> TransitResult:
    """Time to travel from u_a to u_b along the branch (endpoints may be singular).

    Endpoint types are read from ``interval`` when given, else detected from
    u = 0 and F(u) = h.  An endpoint reached only asymptotically yields an
    infinite, converged result.
    """
    if not u_a < u_b:
        raise ValueError("need u_a < u_b")
    F = b.potential
    left = _end_map(b, u_a, "left", interval)
    right = _end_map(b, u_b, "right", interval)
    if (left is not None and _is_divergent(left)) or (right is not None and _is_divergent(right)):
        return TransitResult(math.inf, True, 0.0)
    mid = 0.5 * (u_a + u_b)
    pieces = []
    if left is None and right is None:
        pieces.append((plain_map(F, b.h), u_a, u_b))
    else:
        pieces.append((left or plain_map(F, b.h), u_a, mid))
        pieces.append((right or plain_map(F, b.h), mid, u_b))
    total, err, ok = 0.0, 0.0, True
    for em, ua, ub in pieces:
        sa, sb = sorted(float(x) for x in em.s_of_u(np.array([ua, ub])))
        r = em.integrate(sa, sb, tol / len(pieces))
        total += r.value
        err += r.estimated_error
        ok = ok and r.converged
    if not math.isfinite(total):
        raise BranchDomainError("integrand left the branch: [u_a, u_b] is not inside a branch interval")
    return TransitResult(total, ok, err)


def period(F: Potential, m: float, mode: str, tol: float = DEFAULT_TOL) -> float:
    """Period of peaked/cusped waves or the support length of a compacton.

    All three are twice the transit time from u = 0 to the crest m, at level
    F(0) (peaked, compact-support) or F(m) (cusped).
    """
    if mode in ("peaked", "compact-support"):
        b = SpeedBranch.make(F, F.exact[0])
    elif mode == "cusped":
        b = SpeedBranch.make(F, F.eval(m))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    r = transit_time(b, 0.0, m, tol)
    if not r.converged and not r.infinite:
        raise ArithmeticError(f"quadrature did not converge (estimate {r.value}, error {r.estimated_error})")
    return 2.0 * r.value


def exact_level(F: Potential, h):
    """h snapped to the exact F(0) when it is within the energy tolerance."""
    return F.exact[0] if F.is_h0(h) else to_fraction(h) if isinstance(h, str) else h
