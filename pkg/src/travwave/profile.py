"""Sampled wave profiles built by inverting time-of-flight integrals.

A monotone arc of a level set between two special endpoints (turning points,
critical points, the singular line) is parametrized by the endpoint maps of
:mod:`travwave.quad`.  Each arc is split at its u-midpoint; each half lives in
the variable s of its own endpoint map, where u(s), du/dt(s) are closed-form
and t(s) is a smooth cumulative integral.  Samples are therefore exact in u
and accurate to the quadrature tolerance in t, and they cluster where the
wave is least regular (peaks, cusps, contact points).

Singular waves are assembled from these arcs by reflection, periodic
extension and gluing to the zero solution.  Samples at a singular time are
stored twice, once with each one-sided derivative.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from ._backend import kernels
from .classify import WaveClass, classify_level, compacton_admissible, cusped_admissible, peaked_admissible, \
    zero_solution_admissible
from .potential import BranchInterval, Potential
from .quad import MAP_EXP, EndMap, turning_map, zero_map

N_SAMPLES = 512
TAIL_EPS = 1e-8
ARC_TOL = 1e-12

SINGULAR_KINDS = ("peak", "cusp", "c1", "plateau-edge")


class ProfileError(ValueError):
    """Builder called for a potential or level that does not admit the wave."""


# --- elementary forms ---------------------------------------------------------


@dataclass
class HalfArc:
    """One half of a rising arc, in the variable of its endpoint map.

    ``tau`` is the signed time from the arc midpoint (negative on the left half).
    """

    em: EndMap
    side: int  # -1 left half, +1 right half
    s: np.ndarray
    tau: np.ndarray
    truncated: bool

    @property
    def end_time(self) -> float:
        return float(self.tau[-1] if self.em.kind == MAP_EXP else self.tau[0])

    def u(self) -> np.ndarray:
        return self.em.u(self.s)

    def dudt(self) -> np.ndarray:
        return self.em.dudt(self.s)

    def time_order(self) -> np.ndarray:
        return np.argsort(self.tau, kind="stable")

    def s_at(self, tau: float) -> float:
        """Invert tau(s) on the sampled range (brentq polished within one cell)."""
        k = np.abs(self.tau)
        target = abs(tau)
        # |tau| decreases with s for square-root maps, increases for exp maps
        inc = k[-1] > k[0]
        kk = k if inc else k[::-1]
        ss = self.s if inc else self.s[::-1]
        j = int(np.clip(np.searchsorted(kk, target), 1, len(kk) - 1))
        s0, k0 = ss[j - 1], kk[j - 1]
        s1 = ss[j]
        if target == k0:
            return float(s0)
        lo, hi = (s0, s1) if s0 < s1 else (s1, s0)
        em = self.em

        def g(s):
            v, _ = kernels.gk15(em.kind, em.k, em.jac, em.n0, em.dn, min(s0, s), max(s0, s))
            # moving s away from s0 toward s1 changes |tau| monotonically toward kk[j]
            return k0 + v - target

        ga, gb = g(lo), g(hi)
        if ga * gb > 0:  # target sits on a node up to round-off
            return float(lo if abs(ga) <= abs(gb) else hi)
        return brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


@dataclass
class TailReport:
    side: str
    t_trunc: float
    u_trunc: float
    asymptote: float
    rate: float

    def to_json(self) -> dict:
        return {"side": self.side, "t_trunc": self.t_trunc, "u_trunc": self.u_trunc,
                "asymptote": self.asymptote, "rate": self.rate}


@dataclass
class ElementaryForm:
    """A rising monotone solution arc u(t) from ``lo`` to ``hi``.

    The time origin sits at the finite-time end (the lower end when both are
    reached in finite time); for doubly infinite arcs it sits at the u-midpoint.
    ``domain`` holds the truncated time span and ``full_domain`` the exact one.
    """

    kind: str
    potential: Potential
    h: float
    lo: float
    hi: float
    left: HalfArc
    right: HalfArc
    t_mid: float
    endpoint_data: dict
    tails: list[TailReport] = field(default_factory=list)

    @property
    def domain(self) -> tuple[float, float]:
        return (self.t_mid + self.left.end_time, self.t_mid + self.right.end_time)

    @property
    def full_domain(self) -> tuple[float, float]:
        a, b = self.domain
        return (-math.inf if self.left.truncated else a, math.inf if self.right.truncated else b)

    def samples(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(t, u, du/dt) ordered in t; the midpoint sample appears once."""
        ts, us, vs = [], [], []
        for half, drop_mid in ((self.left, False), (self.right, True)):
            o = half.time_order()
            t = self.t_mid + half.tau[o]
            u = half.u()[o]
            v = half.dudt()[o]
            if drop_mid:
                t, u, v = t[1:], u[1:], v[1:]
            ts.append(t)
            us.append(u)
            vs.append(v)
        return np.concatenate(ts), np.concatenate(us), np.concatenate(vs)

    def u_at(self, t: float) -> float:
        """u at time t; beyond a truncation point the reported exponential tail is used."""
        a, b = self.domain
        for tail in self.tails:
            if (tail.side == "right" and t > b) or (tail.side == "left" and t < a):
                return tail.asymptote + (tail.u_trunc - tail.asymptote) * math.exp(-tail.rate * abs(t - tail.t_trunc))
        if not a - 1e-12 <= t <= b + 1e-12:
            raise ValueError(f"t = {t} outside the arc domain [{a}, {b}]")
        tau = t - self.t_mid
        half = self.left if tau < 0 else self.right
        return float(half.em.u(half.s_at(tau)))


def _cheb(s_max: float, n: int) -> np.ndarray:
    j = np.arange(n + 1)
    s = s_max * (1.0 - np.cos(0.5 * np.pi * j / n))
    s[-1] = s_max
    return s


def _half(em: EndMap, side: int, u_mid: float, n: int, tail_eps: float, tol: float) -> HalfArc:
    s_mid = float(em.s_of_u(u_mid))
    if em.kind == MAP_EXP:
        s_end = -math.log(tail_eps)
        if s_end <= s_mid:
            raise ProfileError("tail_eps is larger than the half-width of the arc")
        # t is nearly linear in s along the tail; keep the s-spacing at the
        # density a finite half gets, so tails resolve as well as finite arcs
        n_tail = max(n, int(math.ceil(n * (s_end - s_mid) / 1.5)))
        s = np.linspace(s_mid, s_end, n_tail + 1)
        cum, ok = em.cumulative(s, tol)
        tau = side * cum
    else:
        s = _cheb(s_mid, n)
        cum, ok = em.cumulative(s, tol)
        tau = side * (cum[-1] - cum)
    if not ok:
        raise ArithmeticError("time-of-flight quadrature did not converge")
    return HalfArc(em, side, s, tau, em.kind == MAP_EXP)


def _tail(form_t: np.ndarray, form_u: np.ndarray, m: float, side: str) -> TailReport:
    d = np.abs(form_u - m)
    if side == "right":
        t_tr, u_tr = form_t[-1], form_u[-1]
    else:
        t_tr, u_tr = form_t[0], form_u[0]
    dtr = abs(u_tr - m)
    sel = (d > 0) & (d <= 10.0 * dtr)
    if sel.sum() < 2:
        rate = float("nan")
    else:
        slope = np.polyfit(form_t[sel], np.log(d[sel]), 1)[0]
        rate = float(abs(slope))
    return TailReport(side, float(t_tr), float(u_tr), float(m), rate)


FORM_KINDS = ("A", "B", "C", "a1", "a2", "b1", "b2", "c1", "c2")


def form_kind(F: Potential, h, interval: BranchInterval) -> str:
    """Elementary-form kind of the rising arc over an admissible interval."""
    rc = interval.right_diag.endpoint_class == "critical"
    if interval.kind == "interior":
        lc = interval.left_diag.endpoint_class == "critical"
        return "C" if lc and rc else ("B" if lc or rc else "A")
    zc = interval.left_diag.zero_contact
    letter = {"finite-slope": "a", "zero-slope": "b", "infinite-slope": "c"}[zc]
    if letter == "b" and F.vanish_order_at_zero() > 2:
        raise ProfileError("the singular line is reached only asymptotically (vanish order >= 3)")
    return letter + ("2" if rc else "1")


def elementary_form(F: Potential, h, interval: BranchInterval, kind: str | None = None,
                    n_samples: int = N_SAMPLES, tail_eps: float = TAIL_EPS, tol: float = ARC_TOL) -> ElementaryForm:
    """Rising elementary form over an admissible interval, sampled and invertible."""
    expected = form_kind(F, h, interval)
    if kind is None:
        kind = expected
    if kind != expected:
        raise ProfileError(f"form kind {kind!r} does not match the interval diagnosis {expected!r}")
    if n_samples < 8:
        raise ValueError("n_samples must be at least 8")
    lo, hi = interval.bounds
    at_h0 = F.is_h0(h)
    hf = F.h0 if at_h0 else float(h)
    if interval.kind == "from-zero":
        lmap = zero_map(F, F.exact[0] if at_h0 else h)
    else:
        lmap = turning_map(F, hf, lo, "left", interval.left_diag.endpoint_class == "critical")
    rmap = turning_map(F, hf, hi, "right", interval.right_diag.endpoint_class == "critical")
    u_mid = 0.5 * (lo + hi)
    nh = n_samples // 2
    left = _half(lmap, -1, u_mid, nh, tail_eps, tol)
    right = _half(rmap, +1, u_mid, nh, tail_eps, tol)
    if not left.truncated:
        t_mid = -left.end_time
    elif not right.truncated:
        t_mid = -right.end_time
    else:
        t_mid = 0.0
    form = ElementaryForm(kind, F, hf, lo, hi, left, right, t_mid, {})
    t, u, v = form.samples()
    data = {"u_low": lo, "u_high": hi}
    if interval.kind == "from-zero":
        data["zero_contact"] = interval.left_diag.zero_contact
        data["slope_at_zero"] = (interval.left_diag.slope if at_h0 else math.inf)
    tails = []
    if left.truncated:
        tails.append(_tail(t, u, lo, "left"))
    if right.truncated:
        tails.append(_tail(t, u, hi, "right"))
    form.tails = tails
    form.endpoint_data = data
    return form


# --- profiles -----------------------------------------------------------------


@dataclass(frozen=True)
class CompositionSpec:
    """Offsets a_k (in support lengths) of compacton copies; optional period multiple."""

    placements: tuple[float, ...] = (0.0,)
    periodic: float | None = None

    def __post_init__(self):
        p = sorted(float(a) for a in self.placements)
        if not p:
            raise ValueError("at least one placement is required")
        for a, b in zip(p, p[1:]):
            if b - a < 1.0 - 1e-12:
                raise ValueError(f"compacton copies at offsets {a} and {b} overlap (need |a_j - a_k| >= 1)")
        if self.periodic is not None:
            if self.periodic <= 1.0:
                raise ValueError("periodic multiple must exceed 1")
            if p[0] < 0 or p[-1] - p[0] > self.periodic - 1.0 + 1e-12:
                raise ValueError("placements must fit in one period without wrap-around overlap")
        object.__setattr__(self, "placements", tuple(p))


@dataclass(frozen=True)
class SingularPoint:
    t: float
    kind: str
    data: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {"t": self.t, "kind": self.kind, **self.data}


@dataclass
class WaveProfile:
    """Sampled wave u(t) with its singular set.

    Samples at a singular time appear twice (left and right one-sided
    derivative).  ``labels`` holds the singular kind on those samples and ""
    elsewhere.
    """

    t: np.ndarray
    u: np.ndarray
    dudt: np.ndarray
    labels: list[str]
    singular_set: list[SingularPoint]
    meta: WaveClass | None
    energy: float
    potential: Potential
    info: dict = field(default_factory=dict)

    @property
    def tag(self) -> str:
        return self.meta.tag if self.meta is not None else self.info.get("tag", "")

    def __len__(self) -> int:
        return len(self.t)

    def pieces(self) -> list[slice]:
        """Index ranges of the smooth pieces between singular (duplicated) times."""
        cuts = [0]
        for i in range(1, len(self.t)):
            if self.t[i] == self.t[i - 1]:
                cuts.append(i)
        cuts.append(len(self.t))
        return [slice(a, b) for a, b in zip(cuts, cuts[1:]) if b > a]

    def u_interp(self, tq) -> np.ndarray:
        """Piecewise cubic Hermite interpolation through (t, u, du/dt) samples."""
        from scipy.interpolate import CubicHermiteSpline
        tq = np.atleast_1d(np.asarray(tq, dtype=float))
        out = np.full(tq.shape, np.nan)
        for sl in self.pieces():
            t, u, v = self.t[sl], self.u[sl], self.dudt[sl]
            if len(t) < 2:
                continue
            ok = np.isfinite(v)
            if not ok.all():
                # infinite one-sided slopes at cusps: fall back to monotone interpolation
                from scipy.interpolate import PchipInterpolator
                f = PchipInterpolator(t, u)
            else:
                f = CubicHermiteSpline(t, u, v)
            sel = (tq >= t[0]) & (tq <= t[-1]) & np.isnan(out)
            out[sel] = f(tq[sel])
        return out

    def metadata(self) -> dict:
        meta = self.meta.to_json() if self.meta is not None else {"tag": self.tag, "attributes": {}}
        return {
            "energy": self.energy,
            "tag": meta["tag"],
            "interval": meta.get("interval"),
            "attributes": meta.get("attributes", {}),
            "potential": self.potential.to_json(),
            "singular_set": [p.to_json() for p in self.singular_set],
            "info": _clean(self.info),
        }


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


class _Builder:
    """Accumulates time-ordered segments and marks the joints."""

    def __init__(self):
        self.t: list[np.ndarray] = []
        self.u: list[np.ndarray] = []
        self.v: list[np.ndarray] = []
        self.lab: list[list[str]] = []
        self.sing: list[SingularPoint] = []

    def add(self, t, u, v, joint: str | None = None, data: dict | None = None):
        """Append a segment starting where the previous one ended.

        ``joint`` names the singular kind at the shared time; None means a
        regular joint, where the duplicate sample is dropped.
        """
        t, u, v = (np.asarray(x, dtype=float) for x in (t, u, v))
        lab = [""] * len(t)
        if self.t:
            t0 = self.t[-1][-1]
            t = t - t[0] + t0 if abs(t[0] - t0) < 1e-9 * max(1.0, abs(t0)) else t
            if joint is None:
                t, u, v, lab = t[1:], u[1:], v[1:], lab[1:]
            else:
                self.lab[-1][-1] = joint
                lab[0] = joint
                self.sing.append(SingularPoint(float(t0), joint, data or {}))
        self.t.append(t)
        self.u.append(u)
        self.v.append(v)
        self.lab.append(lab)

    def zeros(self, t0: float, t1: float, n: int, joint: str | None, data: dict | None = None):
        t = np.linspace(t0, t1, n + 1)
        self.add(t, np.zeros_like(t), np.zeros_like(t), joint, data)

    def close(self, F: Potential, h, meta, info) -> WaveProfile:
        t = np.concatenate(self.t)
        u = np.concatenate(self.u)
        v = np.concatenate(self.v)
        labels = [x for lab in self.lab for x in lab]
        # zero-padding boundaries can leave tiny negatives from round-off
        u = np.where((u < 0) & (u > -1e-300), 0.0, u)
        return WaveProfile(t, u, v, labels, self.sing, meta, float(h), F, info)


def _rise(form: ElementaryForm, t0: float = 0.0):
    """Rising arc samples shifted so the arc starts (lower end) at t0."""
    t, u, v = form.samples()
    return t - t[0] + t0, u, v


def _fall(form: ElementaryForm, t0: float = 0.0):
    """Time-reversed arc (upper end first) starting at t0."""
    t, u, v = form.samples()
    return (t[-1] - t)[::-1] + t0, u[::-1], -v[::-1]


def _find(classes: Sequence[WaveClass], tag: str) -> WaveClass:
    for c in classes:
        if c.tag == tag:
            return c
    raise ProfileError(f"no {tag} wave on this level")


def _periodic_chain(F, h, form: ElementaryForm, meta, joint: str | None, periods: int = 3,
                    joint_data: dict | None = None, info: dict | None = None) -> WaveProfile:
    """Rise/fall chain over ``periods`` periods starting and ending at a crest.

    Lower ends sit at t = 0, T, 2T, ... and are the singular joints.
    """
    tr, ur, vr = _rise(form)
    T = 2.0 * (tr[-1] - tr[0])
    b = _Builder()
    tf, uf, vf = _fall(form, -T / 2)
    b.add(tf, uf, vf)
    for k in range(periods):
        b.add(tr + k * T, ur, vr, joint, joint_data)
        if k < periods - 1:
            tf, uf, vf = _fall(form, k * T + T / 2)
            b.add(tf, uf, vf)
    inf = {"period": T, "singular_times": [k * T for k in range(periods)] if joint else []}
    inf.update(info or {})
    return b.close(F, h, meta, inf)


def _solitary_pair(F, h, form: ElementaryForm, meta, joint: str | None, joint_data=None,
                   info: dict | None = None) -> WaveProfile:
    """Falling copy for t < 0 then the rising arc; the lower end sits at t = 0."""
    b = _Builder()
    tf, uf, vf = _fall(form)
    b.add(tf - tf[-1], uf, vf)
    tr, ur, vr = _rise(form)
    b.add(tr, ur, vr, joint, joint_data)
    inf = {"tails": [tl.to_json() for tl in form.tails]}
    inf.update(info or {})
    return b.close(F, h, meta, inf)


def _form_for(F, h, meta: WaveClass, n_samples, tail_eps) -> ElementaryForm:
    return elementary_form(F, h, meta.interval, None, n_samples, tail_eps)


def build_peaked_periodic(F: Potential, n_samples: int = N_SAMPLES, periods: int = 3) -> WaveProfile:
    """Periodic chain of a1 arcs; peaks (minima u = 0) at t = 0, T, 2T."""
    adm = peaked_admissible(F)
    if adm is None or adm[2]:
        raise ProfileError("potential does not admit peaked periodic waves")
    meta = _find(classify_level(F, F.exact[0]), "peaked-periodic")
    form = _form_for(F, F.exact[0], meta, n_samples, TAIL_EPS)
    return _periodic_chain(F, F.h0, form, meta, "peak", periods, {"slope": adm[1]})


def build_peaked_solitary(F: Potential, n_samples: int = N_SAMPLES, tail_eps: float = TAIL_EPS) -> WaveProfile:
    """Two a2 arcs glued at a downward peak at t = 0."""
    adm = peaked_admissible(F)
    if adm is None or not adm[2]:
        raise ProfileError("potential does not admit peaked solitary waves")
    meta = _find(classify_level(F, F.exact[0]), "peaked-solitary")
    form = _form_for(F, F.exact[0], meta, n_samples, tail_eps)
    return _solitary_pair(F, F.h0, form, meta, "peak", {"slope": adm[1]})


def _compact_form(F, n_samples):
    adm = compacton_admissible(F)
    if adm is None or adm[1]:
        raise ProfileError("potential does not admit compactly supported solitary waves")
    if not zero_solution_admissible(F, F.exact[0]):
        raise ProfileError("the zero solution is not on this level")
    classes = classify_level(F, F.exact[0])
    meta = _find(classes, "compacton")
    return meta, _find(classes, "composite-admissible"), _form_for(F, F.exact[0], meta, n_samples, TAIL_EPS)


def _hump(b: _Builder, form: ElementaryForm, t0: float, first: bool):
    tr, ur, vr = _rise(form, t0)
    b.add(tr, ur, vr, None if first else "c1")
    L2 = tr[-1] - tr[0]
    tf, uf, vf = _fall(form, t0 + L2)
    b.add(tf, uf, vf)
    return 2.0 * L2


def build_compacton(F: Potential, n_samples: int = N_SAMPLES) -> WaveProfile:
    """b1 hump on [0, L] padded with u = 0 on [-L/2, 0] and [L, 3L/2]."""
    meta, _, form = _compact_form(F, n_samples)
    L = 2.0 * (form.domain[1] - form.domain[0])
    nz = max(16, n_samples // 4)
    b = _Builder()
    b.zeros(-L / 2, 0.0, nz, None)
    _hump(b, form, 0.0, first=False)
    b.zeros(L, 1.5 * L, nz, "c1")
    return b.close(F, F.h0, meta, {"support": L, "support_interval": [0.0, L]})


def build_composite(F: Potential, spec: CompositionSpec, n_samples: int = N_SAMPLES, periods: int = 3) -> WaveProfile:
    """Compacton copies on [a_k L, (a_k + 1) L] glued to u = 0 elsewhere."""
    _, meta, form = _compact_form(F, n_samples)
    L = 2.0 * (form.domain[1] - form.domain[0])
    starts = [a * L for a in spec.placements]
    if spec.periodic is not None:
        P = spec.periodic * L
        starts = [s + k * P for k in range(periods) for s in starts]
        lo = starts[0] - 0.5 * (P - (spec.placements[-1] - spec.placements[0] + 1.0) * L)
        hi = lo + periods * P
    else:
        lo, hi = starts[0] - L / 2, starts[-1] + 1.5 * L
    nz_per = max(16, n_samples // 4) / L
    b = _Builder()
    cur = lo
    for s in starts:
        if s > cur + 1e-12 * L:
            b.zeros(cur, s, max(4, int(nz_per * (s - cur))), "c1" if b.t else None)
        _hump(b, form, s, first=not b.t)
        cur = s + L
    if hi > cur + 1e-12 * L:
        b.zeros(cur, hi, max(4, int(nz_per * (hi - cur))), "c1")
    info = {"support": L, "supports": [[s, s + L] for s in starts],
            "period": spec.periodic * L if spec.periodic is not None else None}
    return b.close(F, F.h0, meta, info)


def _front_form(F, n_samples, tail_eps):
    adm = compacton_admissible(F)
    if adm is None or not adm[1]:
        raise ProfileError("potential does not admit fronts with finite-time decay")
    classes = classify_level(F, F.exact[0])
    return classes, _form_for(F, F.exact[0], _find(classes, "front-finite-decay"), n_samples, tail_eps)


def build_front(F: Potential, direction: str = "rising", n_samples: int = N_SAMPLES,
                tail_eps: float = TAIL_EPS, pad: float | None = None) -> WaveProfile:
    """u = 0 up to t = 0, then the b2 arc toward the asymptote (or the mirror image)."""
    if direction not in ("rising", "decaying"):
        raise ValueError("direction must be 'rising' or 'decaying'")
    classes, form = _front_form(F, n_samples, tail_eps)
    meta = _find(classes, "front-finite-decay")
    tr, ur, vr = _rise(form)
    pad = pad if pad is not None else max(1.0, 0.25 * tr[-1])
    nz = max(16, n_samples // 4)
    b = _Builder()
    if direction == "rising":
        b.zeros(-pad, 0.0, nz, None)
        b.add(tr, ur, vr, "plateau-edge")
    else:
        tf, uf, vf = _fall(form)
        b.add(tf - tf[-1], uf, vf)
        b.zeros(0.0, pad, nz, "plateau-edge")
    info = {"direction": direction, "tails": [tl.to_json() for tl in form.tails]}
    return b.close(F, F.h0, meta, info)


def build_plateau(F: Potential, gap: float = 1.0, n_samples: int = N_SAMPLES, tail_eps: float = TAIL_EPS) -> WaveProfile:
    """Decaying front, u = 0 on [-gap/2, gap/2], rising front.

    ``gap = 0`` gives the analytic solitary wave with no singular points.
    """
    if gap < 0:
        raise ValueError("gap must be non-negative")
    classes, form = _front_form(F, n_samples, tail_eps)
    b = _Builder()
    tf, uf, vf = _fall(form)
    b.add(tf - tf[-1] - gap / 2, uf, vf)
    tr, ur, vr = _rise(form)
    if gap > 0:
        nz = max(16, int(n_samples / 4 * min(4.0, max(gap, 0.25))))
        b.zeros(-gap / 2, gap / 2, nz, "plateau-edge")
        b.add(tr + gap / 2, ur, vr, "plateau-edge")
        meta = _find(classes, "plateau")
    else:
        b.add(tr, ur, vr, None)
        meta = _find(classes, "smooth-solitary-min")
    info = {"gap": gap, "tails": [tl.to_json() for tl in form.tails]}
    return b.close(F, F.h0, meta, info)


def build_cusped_periodic(F: Potential, h, n_samples: int = N_SAMPLES, periods: int = 3) -> WaveProfile:
    """Periodic chain of c1 arcs; cusps at t = 0, T, 2T."""
    adm = cusped_admissible(F, h)
    if adm is None or adm[1]:
        raise ProfileError("level does not admit cusped periodic waves")
    meta = _find(classify_level(F, h), "cusped-periodic")
    form = _form_for(F, h, meta, n_samples, TAIL_EPS)
    return _periodic_chain(F, h, form, meta, "cusp", periods)


def build_cusped_solitary(F: Potential, h, n_samples: int = N_SAMPLES, tail_eps: float = TAIL_EPS) -> WaveProfile:
    """Two c2 arcs glued at a cusp at t = 0."""
    adm = cusped_admissible(F, h)
    if adm is None or not adm[1]:
        raise ProfileError("level does not admit cusped solitary waves")
    meta = _find(classify_level(F, h), "cusped-solitary")
    form = _form_for(F, h, meta, n_samples, tail_eps)
    return _solitary_pair(F, h, form, meta, "cusp")


def build_smooth(F: Potential, h, meta: WaveClass, n_samples: int = N_SAMPLES, tail_eps: float = TAIL_EPS,
                 periods: int = 3) -> WaveProfile:
    """Smooth periodic, solitary or front wave over an interior interval."""
    form = _form_for(F, h, meta, n_samples, tail_eps)
    hf = form.h
    if meta.tag == "smooth-periodic":
        return _periodic_chain(F, hf, form, meta, None, periods)
    if meta.tag == "smooth-solitary-min":
        return _solitary_pair(F, hf, form, meta, None)
    if meta.tag == "smooth-solitary-max":
        b = _Builder()
        tr, ur, vr = _rise(form)
        b.add(tr - tr[-1], ur, vr)
        tf, uf, vf = _fall(form)
        b.add(tf, uf, vf)
        return b.close(F, hf, meta, {"tails": [tl.to_json() for tl in form.tails]})
    if meta.tag == "smooth-front":
        b = _Builder()
        t, u, v = form.samples()
        b.add(t, u, v)
        return b.close(F, hf, meta, {"tails": [tl.to_json() for tl in form.tails]})
    raise ProfileError(f"{meta.tag} is not a smooth wave")


def build_constant(F: Potential, meta: WaveClass, n: int = 64, length: float = 1.0) -> WaveProfile:
    p = meta.attributes["p"]
    t = np.linspace(0.0, length, n + 1)
    b = _Builder()
    b.add(t, np.full_like(t, p), np.zeros_like(t))
    return b.close(F, F.eval(p), meta, {})


def build_profile(F: Potential, h, wave: WaveClass, n_samples: int = N_SAMPLES, tail_eps: float = TAIL_EPS,
                  spec: CompositionSpec | None = None, gap: float = 1.0, direction: str = "rising") -> WaveProfile:
    """Dispatch on the wave tag."""
    tag = wave.tag
    if tag in ("smooth-periodic", "smooth-solitary-max", "smooth-front") or (
            tag == "smooth-solitary-min" and wave.interval.kind == "interior"):
        return build_smooth(F, h, wave, n_samples, tail_eps)
    if tag == "smooth-solitary-min":
        return build_plateau(F, 0.0, n_samples, tail_eps)
    if tag == "peaked-periodic":
        return build_peaked_periodic(F, n_samples)
    if tag == "peaked-solitary":
        return build_peaked_solitary(F, n_samples, tail_eps)
    if tag == "compacton":
        return build_compacton(F, n_samples)
    if tag == "composite-admissible":
        return build_composite(F, spec or CompositionSpec((0.0, 2.0)), n_samples)
    if tag == "front-finite-decay":
        return build_front(F, direction, n_samples, tail_eps)
    if tag == "plateau":
        return build_plateau(F, gap, n_samples, tail_eps)
    if tag == "cusped-periodic":
        return build_cusped_periodic(F, h, n_samples)
    if tag == "cusped-solitary":
        return build_cusped_solitary(F, h, n_samples, tail_eps)
    if tag == "constant":
        return build_constant(F, wave)
    raise ProfileError(f"no profile for {tag}")


# --- CSV + sidecar ------------------------------------------------------------


def _fmt(x: float) -> str:
    return "%.17g" % x


def profile_csv(p: WaveProfile) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "u", "dudt", "singular"])
    for t, u, v, lab in zip(p.t, p.u, p.dudt, p.labels):
        w.writerow([_fmt(t), _fmt(u), _fmt(v), lab])
    return buf.getvalue()


def write_profile(p: WaveProfile, csv_path, meta_path=None) -> tuple[Path, Path]:
    csv_path = Path(csv_path)
    meta_path = Path(meta_path) if meta_path is not None else csv_path.with_suffix(".json")
    csv_path.write_text(profile_csv(p))
    meta_path.write_text(json.dumps(p.metadata(), indent=2, sort_keys=True) + "\n")
    return csv_path, meta_path


def read_profile(csv_path, meta_path=None) -> WaveProfile:
    """Load a profile written by :func:`write_profile`."""
    csv_path = Path(csv_path)
    meta_path = Path(meta_path) if meta_path is not None else csv_path.with_suffix(".json")
    meta = json.loads(meta_path.read_text())
    rows = list(csv.DictReader(io.StringIO(csv_path.read_text())))
    if not rows or list(rows[0].keys()) != ["t", "u", "dudt", "singular"]:
        raise ValueError("profile CSV must have header t,u,dudt,singular")
    t = np.array([float(r["t"]) for r in rows])
    u = np.array([float(r["u"]) for r in rows])
    v = np.array([float(r["dudt"]) for r in rows])
    labels = [r["singular"] for r in rows]
    F = Potential.from_json(meta["potential"])
    sing = [SingularPoint(float(s["t"]), s["kind"], {k: v_ for k, v_ in s.items() if k not in ("t", "kind")})
            for s in meta.get("singular_set", [])]
    info = dict(meta.get("info", {}))
    info["tag"] = meta["tag"]
    info["attributes"] = meta.get("attributes", {})
    return WaveProfile(t, u, v, labels, sing, None, float(meta["energy"]), F, info)
