"""Sup-norm and boundary-limsup estimation on circles |z| = r.

Quantities are callables mapping an array of points to an array of
non-negative reals (``+inf`` marks a point where the quantity is undefined).
Aggregation is max-only, so the result does not depend on how the angular
samples are chunked.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientProfile

log = logging.getLogger(__name__)

R_CLIP = 1.0 - 1e-4
MAX_SAMPLES = 2**20
CHUNK = 2**17
REL_TOL = 1e-6
RUNG_TOL = 1e-4


@dataclass(frozen=True)
class SamplingConfig:
    depth: int = 13
    base_n: int = 256
    rmax: float = R_CLIP

    def __post_init__(self):
        if self.base_n < 16:
            raise ValueError("base_n must be at least 16")
        if not 0 < self.rmax <= R_CLIP:
            raise ValueError(f"rmax must lie in (0, {R_CLIP}]")
        if self.depth < 1:
            raise ValueError("depth must be positive")


@dataclass
class RadialProfile:
    radii: list[float]
    sups: list[float]
    angular_counts: list[int]
    refined: list[bool]
    attained_at: list[complex] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["radius", "sup", "samples", "converged"])
        for r, s, n, ok in zip(self.radii, self.sups, self.angular_counts, self.refined):
            w.writerow([format(r, ".17g"), format(s, ".17g"), n, str(bool(ok)).lower()])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "RadialProfile":
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls(
            radii=[float(r["radius"]) for r in rows],
            sups=[float(r["sup"]) for r in rows],
            angular_counts=[int(r["samples"]) for r in rows],
            refined=[r["converged"] == "true" for r in rows],
        )


@dataclass(frozen=True)
class SupEstimate:
    value: float
    attained_at: complex
    samples_used: int
    converged: bool


def ladder(depth: int = 13, rmax: float = R_CLIP) -> list[float]:
    """Radii 1 - 2^-j for j = 1..depth, clipped to rmax, strictly increasing."""
    radii = []
    for j in range(1, depth + 1):
        r = min(1.0 - 2.0 ** (-j), rmax)
        if not radii or r > radii[-1]:
            radii.append(r)
    return radii


def angular_count(r: float, base_n: int) -> int:
    return min(base_n * math.ceil(1.0 / (1.0 - r)), MAX_SAMPLES)


def _max_rows(q, z):
    """Row-wise max of q over points, processed in chunks; NaN counts as +inf.

    ``q`` returns shape (n,) or (k, n); results are arrays of length k.
    """
    best = where = poisoned = None
    for start in range(0, z.size, CHUNK):
        zz = z[start:start + CHUNK]
        vals = np.atleast_2d(np.asarray(q(zz), dtype=float))
        if best is None:
            k = vals.shape[0]
            best, where, poisoned = np.full(k, -np.inf), np.zeros(k, complex), np.zeros(k, int)
        bad = ~np.isfinite(vals)
        if np.any(bad):
            poisoned += bad.sum(axis=1)
            vals = np.where(bad, np.inf, vals)
        idx = np.argmax(vals, axis=1)
        top = vals[np.arange(vals.shape[0]), idx]
        better = top > best
        best = np.where(better, top, best)
        where = np.where(better, zz[idx], where)
    return best, where, poisoned


def _max_on(q, z):
    best, where, poisoned = _max_rows(q, z)
    return float(best[0]), complex(where[0]), int(poisoned[0])


def _circle_rows(q, r: float, base_n: int):
    """Per-row (sup, attained_at, samples, converged) on |z| = r with angular doubling.

    Each row stops refining at its own convergence point, so a row's result
    does not depend on which other rows share the evaluation.
    """
    if r == 0.0:
        best, where, poisoned = _max_rows(q, np.zeros(1, dtype=complex))
        if poisoned.any():
            log.warning("quantity undefined at the origin; sample poisoned to +inf")
        return [(float(b), complex(w), 1, True) for b, w in zip(best, where)]
    n = angular_count(r, base_n)
    theta = 2 * np.pi * np.arange(n) / n
    best, where, poisoned = _max_rows(q, r * np.exp(1j * theta))
    k = best.size
    counts = np.full(k, n)
    done = np.isinf(best)
    converged = done.copy()
    while n < MAX_SAMPLES and not done.all():
        theta = 2 * np.pi * (2 * np.arange(n) + 1) / (2 * n)
        new, new_where, bad = _max_rows(q, r * np.exp(1j * theta))
        n *= 2
        live = ~done
        poisoned = poisoned + np.where(live, bad, 0)
        old = best.copy()
        better = live & (new > best)
        best = np.where(better, new, best)
        where = np.where(better, new_where, where)
        counts = np.where(live, n, counts)
        settled = live & (best - old <= REL_TOL * np.abs(best))
        converged |= settled | (live & np.isinf(best))
        done |= settled | np.isinf(best)
    for j in np.nonzero(poisoned)[0]:
        log.warning("%d samples on |z|=%.17g poisoned to +inf (quantity undefined)", poisoned[j], r)
    return [(float(best[j]), complex(where[j]), int(counts[j]), bool(converged[j])) for j in range(k)]


def _circle(q, r: float, base_n: int):
    return _circle_rows(q, r, base_n)[0]


def sup_on_circle(q, r: float, base_n: int = 256) -> float:
    """Max of q on |z| = r, doubling the angular count until it settles."""
    if not 0 < r <= R_CLIP:
        raise ValueError(f"radius must lie in (0, {R_CLIP}]")
    if base_n < 16:
        raise ValueError("base_n must be at least 16")
    return _circle(q, r, base_n)[0]


def radial_profile(q, config: SamplingConfig = SamplingConfig(), radii=None) -> RadialProfile:
    return radial_profiles(q, config, radii)[0]


def radial_profiles(q, config: SamplingConfig = SamplingConfig(), radii=None) -> list[RadialProfile]:
    """One profile per row of a multi-row quantity, from a single evaluation
    pass; each profile equals what :func:`radial_profile` gives for that row."""
    radii = ladder(config.depth, config.rmax) if radii is None else sorted(radii)
    profs = None
    for r in radii:
        rows = _circle_rows(q, r, config.base_n)
        if profs is None:
            profs = [RadialProfile([], [], [], [], []) for _ in rows]
        for prof, (best, where, n, ok) in zip(profs, rows):
            prof.radii.append(r)
            prof.sups.append(best)
            prof.angular_counts.append(n)
            prof.refined.append(ok)
            prof.attained_at.append(where)
    return profs or [RadialProfile([], [], [], [], [])]


def sup_from_profile(q, profile: RadialProfile) -> SupEstimate:
    """Combine a ladder profile with the origin sample into a norm estimate."""
    best, where, _ = _max_on(q, np.zeros(1, dtype=complex))
    used = 1 + sum(profile.angular_counts)
    for s, z in zip(profile.sups, profile.attained_at):
        if s > best:
            best, where = s, z
    sups = profile.sups
    if len(sups) >= 2:
        top, prev = sups[-1], sups[-2]
        converged = top == prev or abs(top - prev) <= RUNG_TOL * abs(top)
    else:
        converged = False
    return SupEstimate(best, where, used, bool(converged))


def sup_norm(q, rmax: float = R_CLIP, config: SamplingConfig | None = None) -> SupEstimate:
    """Estimate sup over the disk from r = 0 and the radius ladder up to rmax."""
    config = config or SamplingConfig()
    if rmax > R_CLIP:
        raise ValueError(f"rmax must not exceed {R_CLIP}")
    config = SamplingConfig(config.depth, config.base_n, min(rmax, config.rmax))
    return sup_from_profile(q, radial_profile(q, config))


def limsup_estimate(profile: RadialProfile) -> tuple[float, bool]:
    """Max over the last three rungs, and whether the last four are monotone."""
    if len(profile.sups) < 6:
        raise InsufficientProfile(f"need at least 6 rungs, got {len(profile.sups)}")
    est = max(profile.sups[-3:])
    tail = profile.sups[-4:]
    diffs = [b - a for a, b in zip(tail, tail[1:])]
    monotone = all(d >= 0 for d in diffs) or all(d <= 0 for d in diffs)
    return est, monotone
