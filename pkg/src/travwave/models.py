"""Potentials of three shallow-water models and their energy-level tables.

* Camassa-Holm:  F(w) = A w + B w^2 - w^3/2 with A = r - 2 kappa c - c^2/2,
  B = -(c + kappa), after w = u - c.
* Generalized CH: F(w) = A w + B w^2 - (a/6) w^3 with
  A = r + (1 - a/2) c^2 - 2 kappa c, B = (1 - a) c/2 - kappa.
* Moderate-amplitude equation: F'(w) = G(w - d) with d = (1 + c)/14 and
  G(u) = K + (1 - c) u + 3 u^2 - 2 u^3 + 3 u^4, normalized by F(0) = 0.

CH and GCH potentials are sign-normalized to B >= 0 through
w -> -w, F -> -F(-w), h -> -h; the flip is recorded so profiles can be
mapped back with :func:`unflip_profile`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from scipy.optimize import brentq

from .classify import WaveClass, classify_level, critical_levels, peaked_admissible
from .potential import Potential, taylor_shift, to_fraction

# --- parameters ---------------------------------------------------------------


@dataclass(frozen=True)
class CHParams:
    c: Fraction
    kappa: Fraction = Fraction(0)
    r: Fraction = Fraction(0)

    def __init__(self, c, kappa=0, r=0):
        object.__setattr__(self, "c", to_fraction(c))
        object.__setattr__(self, "kappa", to_fraction(kappa))
        object.__setattr__(self, "r", to_fraction(r))

    @property
    def A(self) -> Fraction:
        return self.r - 2 * self.kappa * self.c - self.c ** 2 / 2

    @property
    def B(self) -> Fraction:
        return -(self.c + self.kappa)

    @property
    def normalized(self) -> bool:
        """True when the w -> -w flip is needed to reach B >= 0."""
        return self.B < 0


@dataclass(frozen=True)
class GCHParams:
    a: Fraction
    c: Fraction
    kappa: Fraction = Fraction(0)
    r: Fraction = Fraction(0)

    def __init__(self, a, c, kappa=0, r=0):
        for name, val in (("a", a), ("c", c), ("kappa", kappa), ("r", r)):
            object.__setattr__(self, name, to_fraction(val))

    @property
    def A(self) -> Fraction:
        return self.r + (1 - self.a / 2) * self.c ** 2 - 2 * self.kappa * self.c

    @property
    def B(self) -> Fraction:
        return (1 - self.a) * self.c / 2 - self.kappa

    @property
    def normalized(self) -> bool:
        return self.B < 0


@dataclass(frozen=True)
class MASEParams:
    c: Fraction
    K: Fraction

    def __init__(self, c, K):
        object.__setattr__(self, "c", to_fraction(c))
        object.__setattr__(self, "K", to_fraction(K))

    @property
    def d(self) -> Fraction:
        return (1 + self.c) / 14

    def G(self) -> list[Fraction]:
        return [self.K, 1 - self.c, Fraction(3), Fraction(-2), Fraction(3)]


@dataclass(frozen=True)
class Reduction:
    """A model potential with the orientation flip that produced it."""

    potential: Potential
    flipped: bool
    model: str
    params: object

    def level(self, h):
        """Energy in the normalized orientation for a level h of the original."""
        return -h if self.flipped else h


# --- reductions ---------------------------------------------------------------


def ch_potential(A, B) -> Potential:
    return Potential([0, to_fraction(A), to_fraction(B), Fraction(-1, 2)])


def _flip_cubic(A, B, cubic) -> tuple[list[Fraction], bool]:
    if B < 0:
        return [Fraction(0), A, -B, cubic], True
    return [Fraction(0), A, B, cubic], False


def ch_reduce(params: CHParams, normalize: bool = True) -> Potential:
    return ch_reduction(params, normalize).potential


def ch_reduction(params: CHParams, normalize: bool = True) -> Reduction:
    A, B = params.A, params.B
    if normalize:
        coeffs, flipped = _flip_cubic(A, B, Fraction(-1, 2))
    else:
        coeffs, flipped = [Fraction(0), A, B, Fraction(-1, 2)], False
    return Reduction(Potential(coeffs), flipped, "ch", params)


def gch_reduce(params: GCHParams, normalize: bool = True) -> Potential:
    return gch_reduction(params, normalize).potential


def gch_reduction(params: GCHParams, normalize: bool = True) -> Reduction:
    A, B = params.A, params.B
    cubic = -params.a / 6
    if normalize:
        coeffs, flipped = _flip_cubic(A, B, cubic)
    else:
        coeffs, flipped = [Fraction(0), A, B, cubic], False
    if all(x == 0 for x in coeffs):
        raise ValueError("parameters give F = 0: the traveling-wave equation degenerates")
    return Reduction(Potential(coeffs), flipped, "gch", params)


def mase_reduce(params: MASEParams) -> Potential:
    """F(w) = int_0^w G(x - d) dx, exact in rational arithmetic."""
    g = taylor_shift(params.G(), -params.d)
    return Potential([Fraction(0)] + [gi / (i + 1) for i, gi in enumerate(g)])


def original_potential(reduction: Reduction) -> Potential:
    """The potential in the user's orientation (before any w -> -w flip)."""
    if not reduction.flipped:
        return reduction.potential
    # F(u) = -F_hat(-u)
    return Potential([(-1) ** (i + 1) * x for i, x in enumerate(reduction.potential.exact)])


def unflip_profile(profile, reduction: Reduction):
    """Map a profile of the normalized potential back to the original orientation.

    With u = -w the ODE is preserved for F(u) = -F_hat(-u), and the energy
    changes sign. Verification tools assume u >= 0, so verify before unflipping.
    """
    if not reduction.flipped:
        return profile
    from dataclasses import replace
    info = dict(profile.info)
    info["orientation"] = "original"
    return replace(profile, u=-profile.u, dudt=-profile.dudt, energy=-profile.energy,
                   potential=original_potential(reduction), info=info)


# --- CH case table ------------------------------------------------------------


CH_CASES = ("i", "ii", "iii", "iv", "v", "vi")


def ch_case(A, B) -> str:
    """Case label of the CH potential (B >= 0) from the signs of A, 4B^2 + 6A, B^2 + 2A."""
    A, B = to_fraction(A), to_fraction(B)
    if B < 0:
        raise ValueError("normalize to B >= 0 first")
    if A > 0:
        return "i"
    if A == 0:
        if B > 0:
            return "ii"
        return "vi"  # F = -w^3/2 has no extremum off the origin's inflection
    if 4 * B * B + 6 * A <= 0:
        return "vi"
    s = B * B + 2 * A
    return "iii" if s > 0 else ("iv" if s == 0 else "v")


def ch_extrema(A, B) -> tuple[float, float] | None:
    """(p1, p2) = (2B -+ sqrt(4B^2 + 6A))/3 when 4B^2 + 6A > 0."""
    A, B = float(A), float(B)
    disc = 4 * B * B + 6 * A
    if disc <= 0:
        return None
    s = math.sqrt(disc)
    return (2 * B - s) / 3, (2 * B + s) / 3


# one sampled (A, B) per case, B >= 0
CH_SAMPLES = {
    "i": (Fraction(1), Fraction(0)),
    "ii": (Fraction(0), Fraction(1)),
    "iii": (Fraction(-1, 10), Fraction(1)),
    "iv": (Fraction(-1, 2), Fraction(1)),
    "v": (Fraction(-3, 5), Fraction(1)),
    "vi": (Fraction(-1), Fraction(1)),
}


# --- tables -------------------------------------------------------------------


@dataclass
class TableRow:
    label: str
    h: float
    lo: float
    hi: float
    tags: list[str]
    classes: list[WaveClass] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {"label": self.label, "h": self.h, "band": [_j(self.lo), _j(self.hi)], "tags": self.tags}


def _j(x: float):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def named_levels(F: Potential) -> list[tuple[str, float]]:
    """Critical levels with names: h0 = F(0), h1, h2, ... = F at critical points by position."""
    cps = sorted(F.critical_points(), key=lambda cp: cp.location)
    named = [("h0", F.h0)] + [(f"h{i + 1}", cp.value) for i, cp in enumerate(cps)]
    levels = critical_levels(F)
    out = []
    for v in levels:
        names = [n for n, x in named if abs(x - v) <= 1e-10 * max(1.0, abs(v))]
        out.append(("=".join(sorted(names)), v))
    return out


def energy_table(F: Potential, attributes: bool = False) -> list[TableRow]:
    """Rows for every critical level and for a sample level inside every band."""
    levels = named_levels(F)
    vals = [v for _, v in levels]
    spread = max(1.0, (vals[-1] - vals[0]))
    rows: list[TableRow] = []

    def row(label, h, lo, hi):
        cls = classify_level(F, F.exact[0] if F.is_h0(h) else h, attributes=attributes)
        rows.append(TableRow(label, float(h), lo, hi, [c.tag for c in cls], cls))

    row(f"h<{levels[0][0]}", vals[0] - 0.5 * spread, -math.inf, vals[0])
    for i, (name, v) in enumerate(levels):
        row(f"h={name}", v, v, v)
        if i + 1 < len(levels):
            nxt = levels[i + 1]
            row(f"{name}<h<{nxt[0]}", 0.5 * (v + nxt[1]), v, nxt[1])
    row(f"h>{levels[-1][0]}", vals[-1] + 0.5 * spread, vals[-1], math.inf)
    return rows


def reproduce_table(model: str, params, h_strategy: str = "critical") -> list[TableRow]:
    """Energy table for a model at given parameters.

    ``h_strategy='critical'`` samples every critical level h0, h1, h2 and the
    midpoint of every band between them (plus one level beyond each end).
    """
    if h_strategy != "critical":
        raise ValueError("only the 'critical' strategy is implemented")
    if model == "ch":
        F = ch_reduce(params) if isinstance(params, CHParams) else ch_potential(*params)
    elif model == "gch":
        F = gch_reduce(params)
    elif model == "mase":
        F = mase_reduce(params)
    else:
        raise ValueError(f"unknown model {model!r}")
    return energy_table(F)


def table_text(rows: Sequence[TableRow]) -> str:
    w = max(len(r.label) for r in rows)
    lines = [f"{'energy'.ljust(w)}  classes"]
    for r in rows:
        shown = [t for t in r.tags]
        lines.append(f"{r.label.ljust(w)}  {', '.join(shown) if shown else '-'}")
    return "\n".join(lines)


# --- MASE cases ---------------------------------------------------------------


MASE_CASES = (
    "0<p1<p2,h2>h0",
    "0<p1<p2,h2<h0",
    "0<p1<p2,h2=h0",
    "0=p1<p2",
    "p1<0<p2",
    "p1<p2=0",
    "p1<p2<0",
)


def mase_extrema(params: MASEParams) -> tuple[float, float] | None:
    """(p1, p2): local max then local min of F, or None when F is monotone."""
    F = mase_reduce(params)
    cps = [cp for cp in F.critical_points() if cp.kind in ("local-max", "local-min")]
    if len(cps) != 2:
        return None
    cps.sort(key=lambda cp: cp.location)
    return cps[0].location, cps[1].location


def mase_case(params: MASEParams, tol: float = 1e-12) -> str | None:
    F = mase_reduce(params)
    d = params.d
    g = params.G()
    at0 = sum(gi * (-d) ** i for i, gi in enumerate(g))  # F'(0) exactly
    ext = mase_extrema(params)
    if ext is None:
        return None
    p1, p2 = ext
    if at0 == 0:
        slope = sum(i * gi * (-d) ** (i - 1) for i, gi in enumerate(g) if i)
        return "0=p1<p2" if slope < 0 else "p1<p2=0"
    if p1 > 0:
        h2 = F.eval(p2)
        if abs(h2) <= tol:
            return "0<p1<p2,h2=h0"
        return "0<p1<p2,h2>h0" if h2 > 0 else "0<p1<p2,h2<h0"
    if p2 < 0:
        return "p1<p2<0"
    if p1 < 0 < p2:
        return "p1<0<p2"
    return None


def _K_zero_root(c: Fraction) -> Fraction:
    """K that puts a critical point of F exactly at w = 0 (G(-d) = 0)."""
    d = (1 + c) / 14
    return (1 - c) * d - 3 * d ** 2 - 2 * d ** 3 - 3 * d ** 4


def mase_case_search(c_grid: Iterable = None, K_grid: Iterable = None) -> dict[str, MASEParams]:
    """One parameter point per case from a coarse (c, K) grid.

    Strict-inequality cases come from the grid itself; p1 = 0 and p2 = 0 use
    the exact K with G(-d) = 0; h2 = h0 is solved for K by bracketing.
    """
    c_grid = list(c_grid) if c_grid is not None else [Fraction(i, 4) for i in range(-12, 13)]
    K_grid = list(K_grid) if K_grid is not None else [Fraction(i, 20) for i in range(-40, 41)]
    found: dict[str, MASEParams] = {}
    for c in c_grid:
        c = to_fraction(c)
        for K in K_grid:
            p = MASEParams(c, K)
            case = mase_case(p)
            if case is not None and case not in found and case != "0<p1<p2,h2=h0":
                found[case] = p
        p = MASEParams(c, _K_zero_root(c))
        case = mase_case(p)
        if case is not None and case not in found:
            found[case] = p
    if "0<p1<p2,h2=h0" not in found:
        hit = _search_h2_equal(c_grid, K_grid)
        if hit is not None:
            found["0<p1<p2,h2=h0"] = hit
    return {k: found[k] for k in MASE_CASES if k in found}


def _search_h2_equal(c_grid, K_grid) -> MASEParams | None:
    def h2(c, K):
        p = MASEParams(c, Fraction(K))
        ext = mase_extrema(p)
        if ext is None or ext[0] <= 0:
            return None
        return mase_reduce(p).eval(ext[1])

    for c in c_grid:
        c = to_fraction(c)
        prev = None
        for K in K_grid:
            val = h2(c, float(K))
            if val is not None and prev is not None and prev[1] * val < 0:
                try:
                    K0 = brentq(lambda k: h2(c, k) if h2(c, k) is not None else math.nan, float(prev[0]), float(K),
                                xtol=1e-15, rtol=1e-15)
                except ValueError:
                    prev = (K, val)
                    continue
                p = MASEParams(c, Fraction(K0))
                if mase_case(p, tol=1e-10) == "0<p1<p2,h2=h0":
                    return p
            prev = (K, val) if val is not None else None
    return None


# --- generalized CH conjecture --------------------------------------------------


DEFAULT_GCH_GRID = {
    "a": (-2, -1, 0),
    "c": (-2, -1, 1, 2),
    "kappa": (-1, 0, 1),
    "r": (-1, 0, 1),
}


@dataclass
class ScanPoint:
    params: GCHParams
    orientation: str
    peaked_solitary: bool
    certificate: dict


@dataclass
class ScanResult:
    hits: list[ScanPoint]
    points: list[ScanPoint]

    @property
    def certified(self) -> bool:
        return all(p.certificate.get("holds", True) for p in self.points)

    def to_json(self) -> dict:
        return {
            "n_points": len(self.points),
            "hits": [{"a": str(p.params.a), "c": str(p.params.c), "kappa": str(p.params.kappa),
                      "r": str(p.params.r), "orientation": p.orientation} for p in self.hits],
            "certified": self.certified,
        }


def _certificate(F: Potential) -> dict:
    """Extrema count <= 2 and, when F'(0) < 0, a nonzero slope at the first return to F(0)."""
    n_ext = len([cp for cp in F.critical_points() if cp.kind != "inflection"])
    cert = {"extrema": n_ext, "dF0": float(F.exact[1])}
    ok = n_ext <= 2
    if F.exact[1] < 0:
        adm = peaked_admissible(F)
        if adm is not None:
            cert["m"] = adm[0]
            cert["dFm"] = F.eval(adm[0], 1)
            ok = ok and cert["dFm"] > 0
    cert["holds"] = ok
    return cert


def gch_conjecture_scan(grid: dict | None = None, points: Iterable[GCHParams] | None = None) -> ScanResult:
    """Search the GCH family for peaked solitary waves (expected none for a <= 0).

    Both orientations w and -w are scanned, so the B >= 0 normalization
    cannot hide a solution on the negative side.
    """
    if points is None:
        g = dict(DEFAULT_GCH_GRID)
        g.update(grid or {})
        points = [GCHParams(a, c, k, r) for a, c, k, r in itertools.product(g["a"], g["c"], g["kappa"], g["r"])]
    hits, all_points = [], []
    for prm in points:
        for orient in ("w", "-w"):
            base = [Fraction(0), prm.A, prm.B if orient == "w" else -prm.B, -prm.a / 6]
            if all(x == 0 for x in base):
                continue
            F = Potential(base)
            adm = peaked_admissible(F)
            sp = ScanPoint(prm, orient, bool(adm and adm[2]), _certificate(F) if prm.a <= 0 else {})
            all_points.append(sp)
            if sp.peaked_solitary:
                hits.append(sp)
    return ScanResult(hits, all_points)
