"""Certify that a sampled profile solves the wave equation in the appropriate sense.

Every check works from the samples (t, u, du/dt) and the singular labels
alone, so a profile re-loaded from CSV is judged exactly as the in-memory
original.

The weak form tested against a bump phi is

    int (u^2)_t phi_t + (u_t)^2 phi - 2 F'(u) phi dt = 0,

integrated on each smooth piece by a composite interpolatory rule of degree
six on the (irregular) sample nodes.  Next to a cusp the
piece is integrated in sigma = sqrt(u), where dt = 2 sigma / u_t dsigma turns
the t^(-1/3) blow-up of u_t into smooth integrands.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .potential import Potential
from .profile import WaveProfile

THRESHOLD = 1e-6
DELTA_SAMPLES = 10
CUSP_EXPONENT = -1.0 / 3.0


@dataclass
class VerificationReport:
    first_integral_residual: float
    weak_residual: list[tuple[str, float]]
    limit_residuals: list[dict]
    regularity: list[dict]
    symmetry_defect: float | None
    h1_loc: list[dict]
    verdict: str
    scale: float = 1.0
    failures: list[str] = field(default_factory=list)

    @property
    def max_weak_residual(self) -> float:
        return max((r for _, r in self.weak_residual), default=0.0)

    def to_json(self) -> dict:
        return _finite({
            "first_integral_residual": self.first_integral_residual,
            "scale": self.scale,
            "weak_residual": [{"id": i, "residual": r} for i, r in self.weak_residual],
            "limit_residuals": self.limit_residuals,
            "regularity": self.regularity,
            "symmetry_defect": self.symmetry_defect,
            "h1_loc": self.h1_loc,
            "verdict": self.verdict,
            "failures": self.failures,
        })

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _finite(obj):
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _Fh(p: WaveProfile, F: Potential | None, h: float | None) -> tuple[Potential, float]:
    return (F if F is not None else p.potential), (float(h) if h is not None else p.energy)


def _singular_index_mask(p: WaveProfile, delta: int) -> np.ndarray:
    near = np.zeros(len(p.t), dtype=bool)
    idx = [i for i, lab in enumerate(p.labels) if lab]
    for i in idx:
        near[max(0, i - delta):i + delta + 1] = True
    return near


def energy(p: WaveProfile, F: Potential) -> np.ndarray:
    with np.errstate(invalid="ignore", over="ignore"):
        return p.u * p.dudt ** 2 / 2.0 + F.eval(p.u)


def first_integral_residual(p: WaveProfile, F: Potential | None = None, h: float | None = None,
                            delta_samples: int = DELTA_SAMPLES) -> float:
    """sup |u u_t^2 / 2 + F(u) - h| over samples more than delta_samples from a singular time."""
    F, h = _Fh(p, F, h)
    keep = ~_singular_index_mask(p, delta_samples)
    r = np.abs(energy(p, F) - h)[keep]
    r = r[np.isfinite(r)]
    return float(r.max()) if r.size else 0.0


# --- weak form ----------------------------------------------------------------


def bump(t, c: float, w: float):
    """phi_c(t) = exp(-1/(1 - x^2)), x = (t - c)/w, and its t-derivative."""
    x = (np.asarray(t, dtype=float) - c) / w
    phi = np.zeros_like(x)
    dphi = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    xi = x[inside]
    q = 1.0 - xi * xi
    e = np.exp(-1.0 / q)
    phi[inside] = e
    dphi[inside] = e * (-2.0 * xi / (q * q)) / w
    return phi, dphi


def nodal_weights(x: np.ndarray, order: int = 6) -> np.ndarray:
    """Weights w with sum(w * g) ~ integral of g over [x[0], x[-1]].

    Consecutive blocks of ``order`` intervals are integrated exactly for
    polynomials of degree ``order`` interpolating the block nodes; a short
    final block reuses the last order+1 nodes.  Works for decreasing x too.
    """
    x = np.asarray(x, dtype=float)
    n = len(x) - 1
    w = np.zeros(len(x))
    if n < 1:
        return w
    k = min(order, n)
    start = 0
    while start < n:
        stop = min(start + k, n)
        i0 = max(0, stop - k)
        nodes = x[i0:i0 + k + 1]
        mid = 0.5 * (nodes[0] + nodes[-1])
        half = 0.5 * (nodes[-1] - nodes[0])
        z = (nodes - mid) / half
        za, zb = (x[start] - mid) / half, (x[stop] - mid) / half
        j = np.arange(k + 1)
        mom = (zb ** (j + 1) - za ** (j + 1)) / (j + 1)
        V = np.vander(z, k + 1, increasing=True).T
        w[i0:i0 + k + 1] += half * np.linalg.solve(V, mom)
        start = stop
    return w


def integrate_nodes(g: np.ndarray, x: np.ndarray) -> float:
    return float(np.dot(nodal_weights(x), g))


def _cusp_split(u: np.ndarray, at_start: bool, at_end: bool) -> tuple[int, int]:
    """Sample indices bounding the sigma-integrated cusp neighbourhoods of a piece."""
    n = len(u)
    top = 0.5 * float(np.max(u))
    i0, i1 = 0, n - 1
    if at_start:
        while i0 + 1 < n and u[i0 + 1] <= top and u[i0 + 1] >= u[i0]:
            i0 += 1
    if at_end:
        while i1 - 1 > i0 and u[i1 - 1] <= top and u[i1 - 1] >= u[i1]:
            i1 -= 1
    return i0, i1


def _sigma_v(sig: np.ndarray, v: np.ndarray) -> np.ndarray:
    """sigma * u_t with the cusp-sample value extrapolated from its neighbours."""
    with np.errstate(invalid="ignore"):
        w = sig * v
    bad = ~np.isfinite(w)
    if bad.any():
        good = np.flatnonzero(~bad)
        for i in np.flatnonzero(bad):
            nb = good[np.argsort(np.abs(good - i))[:5]]
            coef = np.polyfit(sig[nb], w[nb], min(3, len(nb) - 1))
            w[i] = np.polyval(coef, sig[i])
    return w


@dataclass
class _Segment:
    """A stretch of one smooth piece with its quadrature variable and weights."""

    t: np.ndarray
    x: np.ndarray
    weights: np.ndarray
    # per-term factors: integrand_k = a_k * phi' + b_k * phi
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray


def _segments(p: WaveProfile, F: Potential) -> list[_Segment]:
    """Split every smooth piece into t- and sigma-integrated segments (center independent)."""
    out = []
    for sl in p.pieces():
        t, u, v = p.t[sl], p.u[sl], p.dudt[sl]
        labs = p.labels[sl]
        if len(t) < 2:
            continue
        at_start = labs[0] == "cusp"
        at_end = labs[-1] == "cusp"
        i0, i1 = _cusp_split(u, at_start, at_end) if (at_start or at_end) else (0, len(t) - 1)
        parts = []
        if at_start and i0 > 0:
            parts.append(("sigma", slice(0, i0 + 1)))
        parts.append(("t", slice(i0, i1 + 1)))
        if at_end and i1 < len(t) - 1:
            parts.append(("sigma", slice(i1, len(t))))
        for mode, s in parts:
            ts, us, vs = t[s], u[s], v[s]
            if len(ts) < 2:
                continue
            fp = F.eval(us, 1)
            if mode == "t":
                x = ts
                a, b, c = 2.0 * us * vs, vs * vs, -2.0 * fp
            else:
                x = np.sqrt(us)
                sv = _sigma_v(x, vs)
                with np.errstate(divide="ignore", invalid="ignore"):
                    dtds = np.where(np.isfinite(vs) & (vs != 0), 2.0 * x / vs, 0.0)
                a, b, c = 4.0 * us * x, 2.0 * sv, -2.0 * fp * dtds
            out.append(_Segment(ts, x, nodal_weights(x), a, b, c))
    return out


def _segment_terms(seg: _Segment, c0: float, w: float) -> np.ndarray:
    out = np.zeros(6)
    if seg.t.max() <= c0 - w or seg.t.min() >= c0 + w:
        return out
    phi, dphi = bump(seg.t, c0, w)
    for k, g in enumerate((seg.a * dphi, seg.b * phi, seg.c * phi)):
        out[k] = float(np.dot(seg.weights, g))
        out[3 + k] = abs(float(np.dot(seg.weights, np.abs(g))))
    return out


def default_test_centers(p: WaveProfile, width: float, n_min: int = 20) -> list[tuple[str, float]]:
    """Centers on and straddling each singular time plus evenly spread ones."""
    t0, t1 = float(p.t[0]), float(p.t[-1])
    lo, hi = t0 + width, t1 - width
    out: list[tuple[str, float]] = []
    for k, sp in enumerate(p.singular_set):
        for j, off in enumerate((0.0, -0.35 * width, 0.35 * width)):
            c = sp.t + off
            if lo <= c <= hi:
                out.append((f"{sp.kind}{k}:{'cmr'[j]}", c))
    n_even = max(n_min - len(out), 8)
    for j, c in enumerate(np.linspace(lo, hi, n_even)):
        out.append((f"even{j}", float(c)))
    return out


def default_width(p: WaveProfile) -> float:
    span = float(p.t[-1] - p.t[0])
    return min(2.0, span / 4.0)


def weak_residual(p: WaveProfile, F: Potential | None = None, test_centers=None,
                  width: float | None = None) -> list[tuple[str, float]]:
    """Normalized weak-form residual for each bump test function.

    The value is |sum of the three integrals| divided by the sum of their L1
    norms, so it is scale free and lies in [0, 1].
    """
    F, _ = _Fh(p, F, None)
    w = default_width(p) if width is None else float(width)
    if not 2.0 * w < p.t[-1] - p.t[0]:
        raise ValueError("profile domain too short for the test-function width")
    if test_centers is None:
        centers = default_test_centers(p, w)
    else:
        centers = [(c if isinstance(c, tuple) else (f"c{j}", float(c))) for j, c in enumerate(test_centers)]
    segs = _segments(p, F)
    out = []
    for name, c in centers:
        acc = np.zeros(6)
        for seg in segs:
            acc += _segment_terms(seg, c, w)
        norm = acc[3:].sum()
        out.append((name, float(abs(acc[:3].sum()) / norm) if norm > 0 else 0.0))
    return out


# --- singular points ------------------------------------------------------------


def _side(p: WaveProfile, tk: float, side: int, k: int, exclude_label: bool = True) -> np.ndarray:
    """Indices of the k samples nearest tk strictly on one side (time-ordered away from tk)."""
    t = p.t
    if side < 0:
        idx = np.flatnonzero(t < tk)[::-1]
    else:
        idx = np.flatnonzero(t > tk)
    if exclude_label:
        idx = idx[[not p.labels[i] for i in idx]]
    return idx[:k]


def singular_limit_check(p: WaveProfile, F: Potential | None = None, h: float | None = None,
                         k: int = 6) -> list[dict]:
    """Extrapolated one-sided limits of the first integral at each singular time.

    ``limits`` holds the limit values of u u_t^2/2 + F(u); ``residual`` is the
    largest distance of these limits from h.
    """
    F, h = _Fh(p, F, h)
    H = energy(p, F)
    out = []
    for sp in p.singular_set:
        lims = []
        for side in (-1, 1):
            idx = _side(p, sp.t, side, k)
            idx = idx[np.isfinite(H[idx])]
            if len(idx) == 0:
                continue
            x = p.t[idx] - sp.t
            deg = min(2, len(idx) - 1)
            lims.append(h + float(np.polyval(np.polyfit(x, H[idx] - h, deg), 0.0)))
        out.append({"t": sp.t, "kind": sp.kind, "limits": lims,
                    "residual": max((abs(x - h) for x in lims), default=0.0)})
    return out


def _one_sided_fit(p: WaveProfile, tk: float, side: int, k: int = 8, deg: int = 3):
    idx = _side(p, tk, side, k)
    x = p.t[idx] - tk
    y = p.dudt[idx]
    coef = np.polyfit(x, y, min(deg, len(idx) - 1))
    return float(np.polyval(coef, 0.0)), float(np.polyval(np.polyder(coef), 0.0))


def regularity_check(p: WaveProfile, F: Potential | None = None, slope_tol: float = 1e-6,
                     second_tol: float = 1e-3, exponent_tol: float = 0.05) -> list[dict]:
    """One-sided derivative limits at singular times by local polynomial fits.

    Peaks: slopes -a / +a.  Contact points: slopes 0 on both sides and
    second derivative -F''(0)/2 on the side where u > 0.  Cusps: |u_t| blows
    up like |t - t_k|^(-1/3).
    """
    F, _ = _Fh(p, F, None)
    out = []
    a = math.sqrt(-2.0 * F.coeffs[1]) if F.coeffs[1] < 0 else 0.0
    for sp in p.singular_set:
        rec: dict = {"t": sp.t, "kind": sp.kind}
        if sp.kind == "cusp":
            exps = []
            for side in (-1, 1):
                idx = _side(p, sp.t, side, 400)
                umax = float(np.max(p.u[idx])) if len(idx) else 0.0
                sel = idx[(p.u[idx] <= 1e-3 * umax) & (p.u[idx] > 0)]
                if len(sel) < 4:
                    sel = idx[:8]
                x = np.log(np.abs(p.t[sel] - sp.t))
                y = np.log(np.abs(p.dudt[sel]))
                exps.append(float(np.polyfit(x, y, 1)[0]))
            rec["exponent"] = exps
            rec["ok"] = all(abs(e - CUSP_EXPONENT) <= exponent_tol for e in exps)
        else:
            (vl, al), (vr, ar) = _one_sided_fit(p, sp.t, -1), _one_sided_fit(p, sp.t, 1)
            rec["slopes"] = [vl, vr]
            rec["second"] = [al, ar]
            if sp.kind == "peak":
                rec["expected_slope"] = a
                rec["ok"] = abs(vl + a) <= slope_tol and abs(vr - a) <= slope_tol
            else:
                expect = -float(F.derivative_at_zero(2)) / 2.0
                inside = [side for side in (-1, 1) if p.u[_side(p, sp.t, side, 1)].max(initial=0.0) > 0]
                want = [expect if s in inside else 0.0 for s in (-1, 1)]
                rec["expected_second"] = want
                rec["ok"] = (abs(vl) <= slope_tol and abs(vr) <= slope_tol
                             and all(abs(g - w_) <= second_tol * max(1.0, abs(w_)) for g, w_ in zip((al, ar), want)))
        out.append(rec)
    return out


def symmetry_centers(p: WaveProfile) -> list[float]:
    """Peaks, cusps and interior crests/troughs where u_t vanishes with u > 0."""
    cs = [sp.t for sp in p.singular_set if sp.kind in ("peak", "cusp")]
    t0, t1 = p.t[0], p.t[-1]
    for i in range(1, len(p.t) - 1):
        if p.dudt[i] == 0.0 and p.u[i] > 0 and not p.labels[i] and t0 < p.t[i] < t1:
            cs.append(float(p.t[i]))
    if "symmetry_center" in p.info:
        cs.append(float(p.info["symmetry_center"]))
    return sorted(set(cs))


def symmetry_check(p: WaveProfile, centers=None) -> float | None:
    """max |u(t* + s) - u(t* - s)| over each center t*; None when there is none."""
    cs = symmetry_centers(p) if centers is None else list(centers)
    if not cs:
        return None
    t0, t1 = float(p.t[0]), float(p.t[-1])
    worst = 0.0
    tol_t = 1e-9 * max(1.0, abs(t0), abs(t1))
    for c in cs:
        s_max = min(c - t0, t1 - c)
        sel = (p.t > c) & (p.t - c <= s_max)
        mirror = 2 * c - p.t[sel]
        j = np.clip(np.searchsorted(p.t, mirror), 1, len(p.t) - 1)
        jj = np.where(np.abs(p.t[j - 1] - mirror) < np.abs(p.t[j] - mirror), j - 1, j)
        exact = np.abs(p.t[jj] - mirror) <= tol_t
        um = np.where(exact, p.u[jj], np.nan)
        if not exact.all():
            um[~exact] = p.u_interp(mirror[~exact])
        d = np.abs(p.u[sel] - um)
        d = d[np.isfinite(d)]
        if d.size:
            worst = max(worst, float(d.max()))
    return worst


def h1_loc_check(p: WaveProfile, deltas=(1e-2, 1e-3, 1e-4, 1e-5)) -> list[dict]:
    """Integral of u_t^2 over [t_k - delta, t_k + delta] at each cusp as delta shrinks."""
    out = []
    for sp in p.singular_set:
        if sp.kind != "cusp":
            continue
        vals = np.zeros(len(deltas))
        for side in (-1, 1):
            idx = _side(p, sp.t, side, 10 ** 6, exclude_label=False)
            idx = idx[np.isfinite(p.dudt[idx]) | (np.abs(p.t[idx] - sp.t) == 0)]
            dist = np.concatenate([[0.0], np.abs(p.t[idx] - sp.t)])
            sig = np.concatenate([[0.0], np.sqrt(p.u[idx])])
            g = np.concatenate([[np.nan], 2.0 * np.sqrt(p.u[idx]) * np.abs(p.dudt[idx])])
            g[0] = g[1]
            mono = np.concatenate([[True], np.diff(dist) > 0])
            dist, sig, g = dist[mono], sig[mono], g[mono]
            cum = np.concatenate([[0.0], np.cumsum(0.5 * (g[1:] + g[:-1]) * np.diff(sig))])
            vals += np.interp(np.asarray(deltas, float), dist, cum)
        diffs = np.abs(np.diff(vals))
        converged = bool(np.all(np.diff(vals) <= 0) and np.all(np.diff(diffs) <= 0) and vals[-1] < vals[0])
        out.append({"t": sp.t, "deltas": list(deltas), "integrals": vals.tolist(), "converged": converged})
    return out


def verify_profile(p: WaveProfile, F: Potential | None = None, h: float | None = None,
                   threshold: float = THRESHOLD, width: float | None = None) -> VerificationReport:
    F, h = _Fh(p, F, h)
    scale = F.scale(float(np.max(p.u)) if len(p.u) else 1.0)
    fi = first_integral_residual(p, F, h)
    weak = weak_residual(p, F, width=width)
    lim = singular_limit_check(p, F, h)
    reg = regularity_check(p, F)
    sym = symmetry_check(p)
    h1 = h1_loc_check(p)
    failures = []
    if not fi <= threshold * scale:
        failures.append("first-integral")
    if any(not r <= threshold for _, r in weak):
        failures.append("weak-form")
    if any(not x["residual"] <= threshold for x in lim):
        failures.append("singular-limit")
    if any(not x["ok"] for x in reg):
        failures.append("regularity")
    if any(not x["converged"] for x in h1):
        failures.append("h1-loc")
    kinds = {sp.kind for sp in p.singular_set}
    if failures:
        verdict = "fail"
    elif not kinds:
        verdict = "strong"
    elif kinds <= {"c1", "plateau-edge"}:
        verdict = "strong-singular"
    else:
        verdict = "weak-singular"
    return VerificationReport(fi, weak, lim, reg, sym, h1, verdict, scale, failures)
