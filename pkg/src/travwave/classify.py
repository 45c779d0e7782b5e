"""Decide which bounded traveling waves exist on an energy level of F.

Each maximal interval of {F < h} on [0, inf) that carries a bounded branch is
mapped to wave classes:

* interior intervals give smooth periodic, solitary or front orbits according
  to how many endpoints are critical points of F;
* intervals starting at the singular line u = 0 on the level h = F(0) give
  peaked waves when F'(0) < 0 and compactly supported, front or plateau waves
  when F'(0) = 0 < -F''(0);
* intervals starting at u = 0 above F(0) give cusped waves.

Constant solutions sit at the critical points p >= 0 of F with F(p) = h.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .potential import TOL_ENERGY, BranchInterval, Potential
from .quad import SpeedBranch, transit_time

SMOOTH_TAGS = ("smooth-periodic", "smooth-solitary-max", "smooth-solitary-min", "smooth-front")
PEAKED_TAGS = ("peaked-periodic", "peaked-solitary")
COMPACT_FAMILY = ("compacton", "composite-admissible", "front-finite-decay", "plateau")
CUSPED_TAGS = ("cusped-periodic", "cusped-solitary")
ALL_TAGS = SMOOTH_TAGS + PEAKED_TAGS + COMPACT_FAMILY + CUSPED_TAGS + ("constant", "none-singular")


@dataclass(frozen=True)
class WaveClass:
    """One wave family on a level set.

    ``interval`` is None only for constants, whose location is ``attributes['p']``.
    """

    tag: str
    interval: BranchInterval | None
    attributes: dict = field(default_factory=dict, compare=False)

    def bounds(self) -> tuple[float, float]:
        if self.interval is None:
            p = self.attributes["p"]
            return (p, p)
        return self.interval.bounds

    def to_json(self) -> dict:
        return {"tag": self.tag, "interval": list(self.bounds()),
                "attributes": {k: _json_num(v) for k, v in sorted(self.attributes.items())}}


def _json_num(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    return v


# --- admissibility predicates -------------------------------------------------


def _from_zero(F: Potential, h) -> BranchInterval | None:
    for iv in F.admissible_intervals(h):
        if iv.kind == "from-zero":
            return iv
    return None


def peaked_admissible(F: Potential) -> tuple[float, float, bool] | None:
    """(m, a, solitary) when F'(0) < 0 and F returns to F(0) at some m > 0."""
    if F.exact[1] >= 0:
        return None
    iv = _from_zero(F, F.exact[0])
    if iv is None:
        return None
    return iv.right_end, iv.left_diag.slope, iv.right_diag.endpoint_class == "critical"


def compacton_admissible(F: Potential) -> tuple[float, bool] | None:
    """(m, front_mode) when F'(0) = 0, F''(0) < 0 and F returns to F(0) at m."""
    if len(F.exact) < 3 or F.exact[1] != 0 or F.exact[2] >= 0:
        return None
    iv = _from_zero(F, F.exact[0])
    if iv is None:
        return None
    return iv.right_end, iv.right_diag.endpoint_class == "critical"


def cusped_admissible(F: Potential, h) -> tuple[float, bool] | None:
    """(m, solitary) when h > F(0) and F < h on [0, m) with F(m) = h."""
    if F.is_h0(h) or float(h) < F.h0:
        return None
    iv = _from_zero(F, h)
    if iv is None:
        return None
    return iv.right_end, iv.right_diag.endpoint_class == "critical"


def zero_solution_admissible(F: Potential, h) -> bool:
    """u = 0 solves the first-integral equation exactly on the level h = F(0)."""
    return F.is_h0(h)


# --- level classification -----------------------------------------------------


def _half_time(F: Potential, h, iv: BranchInterval) -> float:
    b = SpeedBranch.make(F, h)
    r = transit_time(b, iv.left_end, iv.right_end, interval=iv)
    return r.value


def _classify_interior(F: Potential, h, iv: BranchInterval, attributes: bool) -> list[WaveClass]:
    lc = iv.left_diag.endpoint_class == "critical"
    rc = iv.right_diag.endpoint_class == "critical"
    m1, m2 = iv.bounds
    if not lc and not rc:
        attrs = {"crest": m2, "trough": m1}
        if attributes:
            attrs["period"] = 2.0 * _half_time(F, h, iv)
        return [WaveClass("smooth-periodic", iv, attrs)]
    if lc and rc:
        return [WaveClass("smooth-front", iv, {"asymptote_low": m1, "asymptote_high": m2})]
    if rc:
        # u rests at the saddle m2 at both ends and dips to m1
        return [WaveClass("smooth-solitary-min", iv, {"asymptote": m2, "trough": m1})]
    return [WaveClass("smooth-solitary-max", iv, {"asymptote": m1, "crest": m2})]


def _classify_from_zero(F: Potential, h, iv: BranchInterval, at_h0: bool, attributes: bool) -> list[WaveClass]:
    m = iv.right_end
    solitary = iv.right_diag.endpoint_class == "critical"
    if not at_h0:
        if solitary:
            return [WaveClass("cusped-solitary", iv, {"crest": m, "asymptote": m})]
        attrs = {"crest": m}
        if attributes:
            attrs["period"] = 2.0 * _half_time(F, h, iv)
        return [WaveClass("cusped-periodic", iv, attrs)]
    n = F.vanish_order_at_zero()
    if n == 1:
        a = iv.left_diag.slope
        if solitary:
            return [WaveClass("peaked-solitary", iv, {"crest": m, "asymptote": m, "slope": a})]
        attrs = {"crest": m, "slope": a}
        if attributes:
            attrs["period"] = 2.0 * _half_time(F, F.exact[0], iv)
        return [WaveClass("peaked-periodic", iv, attrs)]
    if n == 2:
        if solitary:
            return [WaveClass("front-finite-decay", iv, {"asymptote": m}),
                    WaveClass("plateau", iv, {"asymptote": m}),
                    WaveClass("smooth-solitary-min", iv, {"asymptote": m, "trough": 0.0})]
        attrs = {"crest": m}
        if attributes:
            attrs["support"] = 2.0 * _half_time(F, F.exact[0], iv)
        return [WaveClass("compacton", iv, dict(attrs)), WaveClass("composite-admissible", iv, dict(attrs))]
    return [WaveClass("none-singular", iv, {"vanish_order": n})]


def classify_level(F: Potential, h, u_max: float | None = None, attributes: bool = True) -> list[WaveClass]:
    """Every wave class supported on the level H = h.

    With ``attributes=False`` the period and support quadratures are skipped.
    """
    at_h0 = F.is_h0(h)
    level = F.exact[0] if at_h0 else h
    out: list[WaveClass] = []
    for iv in F.admissible_intervals(level, u_max):
        if iv.kind == "interior":
            out.extend(_classify_interior(F, level, iv, attributes))
        else:
            out.extend(_classify_from_zero(F, level, iv, at_h0, attributes))
    out.extend(_constants(F, level, u_max))
    return out


def _constants(F: Potential, h, u_max: float | None) -> list[WaveClass]:
    hi = u_max if u_max is not None else F.default_u_max(float(h))
    out = []
    for cp in F.critical_points(0.0, hi):
        p = cp.location
        if p == 0.0 or abs(p) <= 1e-14:
            hit = F.is_h0(h) and F.exact[1] == 0
            p = 0.0
        else:
            hit = abs(cp.value - float(h)) <= TOL_ENERGY * max(1.0, F.scale(p))
        if hit:
            out.append(WaveClass("constant", None, {"p": p, "kind": cp.kind}))
    return out


def critical_levels(F: Potential) -> list[float]:
    """h0 plus the values of F at all its real critical points, sorted and merged."""
    vals = [F.h0] + [cp.value for cp in F.critical_points()]
    vals.sort()
    merged: list[float] = []
    for v in vals:
        if merged and abs(v - merged[-1]) <= TOL_ENERGY * max(1.0, abs(v)):
            if v == F.h0:
                merged[-1] = v
            continue
        merged.append(v)
    return merged


def classify_sweep(F: Potential, h_values: Iterable[float] = (), insert_critical: bool = True,
                   attributes: bool = True) -> list[tuple[float, list[WaveClass]]]:
    """classify_level over h_values, with the critical levels of F inserted."""
    hs = [float(h) for h in h_values]
    if insert_critical:
        hs.extend(critical_levels(F))
    hs.sort()
    uniq: list[float] = []
    for h in hs:
        if uniq and abs(h - uniq[-1]) <= TOL_ENERGY * max(1.0, abs(h)):
            continue
        uniq.append(h)
    return [(h, classify_level(F, h, attributes=attributes)) for h in uniq]


def tags(classes: Sequence[WaveClass]) -> list[str]:
    return [c.tag for c in classes]


def report(h, classes: Sequence[WaveClass]) -> dict:
    return {"h": float(h), "classes": [c.to_json() for c in classes]}


def report_json(h, classes: Sequence[WaveClass]) -> str:
    return json.dumps(report(h, classes), indent=2, sort_keys=True)
