"""Numerical verdicts for the univalence and bounded-valence criteria."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum

from .errors import AnalyticOnly, MissingParam
from .harmonic import HarmonicMap, is_analytic
from .operators import weighted_quantity
from .sampling import SamplingConfig, limsup_estimate, radial_profile, sup_from_profile
from .valence import valence_sweep


class Criterion(str, Enum):
    BECKER_ANALYTIC = "becker_analytic"
    NEHARI_ANALYTIC = "nehari_analytic"
    BECKER_HARMONIC = "becker_harmonic"
    THM_MAIN = "thm_main_pre_schwarzian"
    THM_MAIN2 = "thm_main2_schwarzian"
    SCHWARZ_ANNULUS = "schwarz_annulus"


# criterion -> (channel, threshold or None, kind, analytic only, prediction)
_TABLE = {
    Criterion.BECKER_ANALYTIC: ("pre", 1.0, "sup", True, "univalent"),
    Criterion.NEHARI_ANALYTIC: ("nehari", 2.0, "sup", True, "univalent"),
    Criterion.BECKER_HARMONIC: ("becker", 1.0, "sup", False, "univalent"),
    Criterion.THM_MAIN: ("becker", 1.0, "limsup", False, "bounded"),
    Criterion.THM_MAIN2: ("nehari", None, "limsup", False, "bounded"),
    Criterion.SCHWARZ_ANNULUS: ("nehari", 2.0, "annulus", True, "bounded"),
}


@dataclass(frozen=True)
class Verdict:
    criterion: Criterion
    quantity: float
    threshold: float
    satisfied: bool
    margin: float
    certitude: str = "estimate"
    params: dict = field(default_factory=dict)
    monotone_tail: bool | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["criterion"] = self.criterion.value
        return d


def _verdict(criterion, quantity, threshold, certitude, params, monotone=None) -> Verdict:
    return Verdict(criterion, quantity, threshold, quantity < threshold, threshold - quantity,
                   certitude, params, monotone)


def check(f: HarmonicMap, criterion, params: dict | None = None,
          config: SamplingConfig | None = None, profile_cache: dict | None = None) -> Verdict:
    """Estimate the criterion quantity for ``f`` and compare it with its threshold.

    Bounded-valence criteria are stated for maps that are locally univalent in
    the whole disk; a sample where the operator is undefined (for instance a
    critical point of h) makes the reported quantity +inf.
    """
    criterion = Criterion(criterion)
    params = dict(params or {})
    config = config or SamplingConfig()
    channel, threshold, kind, analytic_only, _ = _TABLE[criterion]
    if analytic_only and not is_analytic(f):
        raise AnalyticOnly(f"{criterion.value} applies to analytic maps only (g must vanish)")
    if criterion is Criterion.THM_MAIN2:
        if params.get("delta0") is None:
            raise MissingParam("thm_main2_schwarzian needs delta0 (no default: its sharp value is unknown)")
        threshold = float(params["delta0"])
        if threshold <= 0:
            raise MissingParam("delta0 must be positive")
    if criterion is Criterion.SCHWARZ_ANNULUS and params.get("r0") is None:
        raise MissingParam("schwarz_annulus needs the inner radius r0")

    q = weighted_quantity(f, channel)
    cache = profile_cache if profile_cache is not None else {}
    if channel not in cache:
        prof = radial_profile(q, config)
        cache[channel] = (prof, sup_from_profile(q, prof))
    prof, est = cache[channel]

    if kind == "sup":
        # sup attained on the outermost rung: the true sup may lie beyond the clip
        clipped = math.isfinite(est.value) and est.value > 0 and est.value == prof.sups[-1]
        return _verdict(criterion, est.value, threshold,
                        "boundary-clipped" if clipped else "estimate", params)
    if kind == "limsup":
        value, monotone = limsup_estimate(prof)
        if math.isinf(est.value):
            value = math.inf
        return _verdict(criterion, value, threshold, "estimate", params, monotone)

    r0 = float(params["r0"])
    if not 0 <= r0 < 1:
        raise MissingParam("r0 must lie in [0, 1)")
    radii = [r for r in prof.radii if r >= r0]
    value = max((s for r, s in zip(prof.radii, prof.sups) if r >= r0), default=-math.inf)
    if r0 > 0 and r0 not in radii and r0 <= config.rmax:
        extra = radial_profile(q, config, radii=[r0])
        value = max(value, extra.sups[0])
    if r0 == 0 or math.isinf(est.value):
        value = max(value, est.value)
    return _verdict(criterion, value, threshold, "estimate", params)


def check_all(f: HarmonicMap, params: dict | None = None, config: SamplingConfig | None = None,
              criteria=None, profile_cache: dict | None = None) -> list[Verdict]:
    """Run every applicable criterion, sharing profiles between them.

    ``profile_cache`` maps channel -> (RadialProfile, SupEstimate) computed with
    the same ``config``; missing channels are filled in.
    """
    params = dict(params or {})
    analytic = is_analytic(f)
    if criteria is None:
        criteria = [c for c in Criterion
                    if (analytic or not _TABLE[c][3])
                    and (c is not Criterion.THM_MAIN2 or params.get("delta0") is not None)
                    and (c is not Criterion.SCHWARZ_ANNULUS or params.get("r0") is not None)]
    cache = profile_cache if profile_cache is not None else {}
    out = []
    for c in criteria:
        c = Criterion(c)
        sub = {k: params[k] for k in ("delta0", "r0") if k in params and _needs(c, k)}
        out.append(check(f, c, sub, config, cache))
    return out


def _needs(c: Criterion, key: str) -> bool:
    return (key == "delta0" and c is Criterion.THM_MAIN2) or (key == "r0" and c is Criterion.SCHWARZ_ANNULUS)


def prediction(v: Verdict) -> str:
    if not v.satisfied:
        return "none"
    return _TABLE[v.criterion][4]


def validate_prediction(f: HarmonicMap, v: Verdict, r: float, wgrid: dict,
                        r_inner: float | None = None, crosscheck: bool = True) -> dict:
    """Compare a verdict's prediction with the measured valence on |z| < r.

    A satisfied univalence criterion is consistent when the sweep never counts
    more than one preimage; a satisfied bounded-valence criterion is consistent
    when the measured maximum is the same on the inner rung ``r_inner``
    (default 1 - 2(1 - r)) and on ``r``.
    """
    predicted = prediction(v)
    outer = valence_sweep(f, r, wgrid, crosscheck=crosscheck)
    record = {
        "criterion": v.criterion.value,
        "predicted": predicted,
        "measured_max": outer.max_count,
        "radius": r,
    }
    if predicted == "univalent":
        record["consistent"] = outer.max_count is not None and outer.max_count <= 1
    elif predicted == "bounded":
        r_inner = 1.0 - 2.0 * (1.0 - r) if r_inner is None else r_inner
        inner = valence_sweep(f, r_inner, wgrid, crosscheck=crosscheck)
        record["inner_radius"] = r_inner
        record["inner_max"] = inner.max_count
        record["consistent"] = outer.max_count is not None and inner.max_count == outer.max_count
    else:
        record["consistent"] = True
    return record
