"""Preimage counting n(f, w) on subdisks |z| < r.

Two independent routes: the degree of ``f - w`` along |z| = r (argument
principle, valid for sense-preserving maps) and a damped Newton solve of
``f(z) = w`` from a triangular seed lattice.  ``valence_sweep`` runs both
over a grid of targets and flags every disagreement.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ContourThroughTarget,
    HarmvalError,
    JacobianSingular,
    MathDomainError,
    NonConvergence,
    OrientationViolation,
    SeedBudgetExceeded,
)
from .expr import OK, raise_for_status
from .harmonic import HarmonicMap, map_jets

log = logging.getLogger(__name__)

CONTOUR_GAP = 1e-6
PERTURB_STEP = 1e-4
MAX_PERTURB = 3
MAX_DEPTH = 24
N_CONTOUR = 512
NEWTON_TOL = 1e-12
DEDUP = 1e-8
SEED_BUDGET = 250_000
MAX_ITER = 60
# outermost sweep radius: the 10th ladder rung, so sweeps can sit on ladder radii
R_SWEEP_MAX = 1.0 - 2.0 ** -10

CLEAN = "clean"
PERTURBED = "perturbed-contour"
ORIENTATION = "orientation-violation"
MISMATCH = "oracle-mismatch"
UNCHECKED = "unchecked"
FAILED = "contour-failure"


@dataclass
class ValenceReport:
    radius: float
    targets: list[complex]
    counts: list[int | None]
    max_count: int | None
    crosscheck: list[bool | None]
    flags: list[str]
    newton_counts: list[int | None] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "targets": [[w.real, w.imag] for w in self.targets],
            "counts": self.counts,
            "max_count": self.max_count,
            "crosscheck": self.crosscheck,
            "flags": self.flags,
            "newton_counts": self.newton_counts,
        }


def grid_targets(wgrid: dict) -> list[complex]:
    """Targets of a grid spec ``{"re": [lo, hi, n], "im": [lo, hi, n]}``."""
    re_lo, re_hi, re_n = wgrid["re"]
    im_lo, im_hi, im_n = wgrid["im"]
    xs = np.linspace(float(re_lo), float(re_hi), int(re_n))
    ys = np.linspace(float(im_lo), float(im_hi), int(im_n))
    return [complex(x, y) for y in ys for x in xs]


def _samples(f: HarmonicMap, z):
    hj, gj, status = map_jets(f, z)
    if np.any(status):
        k = int(np.argmax(status != OK))
        raise_for_status(int(status[k]), complex(z[k]))
    value = hj.f0 + np.conj(gj.f0)
    a, b = np.abs(hj.f1), np.abs(gj.f1)
    return value, a * a - b * b, a + b


def check_orientation(f: HarmonicMap, r: float, n_rad: int = 48, n_ang: int = 192) -> None:
    """Raise OrientationViolation if the Jacobian is negative at a witness in |z| <= r."""
    rad = r * np.arange(n_rad + 1) / n_rad
    ang = 2 * np.pi * np.arange(n_ang) / n_ang
    z = (rad[:, None] * np.exp(1j * ang)[None, :]).ravel()
    _, jac, _ = _samples(f, z)
    if np.any(jac < 0):
        k = int(np.argmin(jac))
        raise OrientationViolation(f"Jacobian {jac[k]:.3g} < 0 at z={z[k]}: sign-mixed map")


def _degree(f: HarmonicMap, w: complex, r: float) -> int:
    """Winding of f - w along |z| = r by adaptive subdivision of the contour.

    A segment is accepted when its chord is shorter than both endpoint
    moduli, which keeps each argument increment below pi/3.
    """
    theta = 2 * np.pi * np.arange(N_CONTOUR + 1) / N_CONTOUR
    theta[-1] = 2 * np.pi
    vals, jac, speed = _samples(f, r * np.exp(1j * theta))
    for depth in range(MAX_DEPTH + 1):
        v = vals - w
        mod = np.abs(v)
        if np.any(jac < 0):
            raise OrientationViolation(f"negative Jacobian on |z|={r}")
        if np.any(mod < CONTOUR_GAP * np.maximum(speed, 1e-300)):
            raise ContourThroughTarget(f"a preimage of {w} lies within {CONTOUR_GAP:g} of |z|={r}")
        chord = np.abs(np.diff(v))
        bad = chord >= np.minimum(mod[:-1], mod[1:])
        if not np.any(bad):
            total = np.sum(np.angle(v[1:] / v[:-1]))
            return int(round(total / (2 * np.pi)))
        if depth == MAX_DEPTH:
            break
        idx = np.nonzero(bad)[0]
        mid = 0.5 * (theta[idx] + theta[idx + 1])
        mv, mj, ms = _samples(f, r * np.exp(1j * mid))
        theta = np.insert(theta, idx + 1, mid)
        vals = np.insert(vals, idx + 1, mv)
        jac = np.insert(jac, idx + 1, mj)
        speed = np.insert(speed, idx + 1, ms)
    raise NonConvergence(f"contour subdivision exceeded depth {MAX_DEPTH} for w={w}")


def _witness_radius(r: float) -> float:
    return min(r + MAX_PERTURB * PERTURB_STEP, 0.5 * (1.0 + r))


def winding_count(f: HarmonicMap, w: complex, r: float) -> tuple[int, float]:
    """Degree on |z| = r' and the radius r' actually used (after nudges)."""
    check_orientation(f, _witness_radius(r))
    rr = r
    for attempt in range(MAX_PERTURB + 1):
        try:
            return _degree(f, complex(w), rr), rr
        except ContourThroughTarget:
            if attempt == MAX_PERTURB:
                raise
            rr = rr + PERTURB_STEP
            log.info("target %s too close to contour; nudging radius to %.6f", w, rr)
    raise AssertionError("unreachable")


def winding_number(f: HarmonicMap, w: complex, r: float) -> int:
    """Number of preimages of w in |z| < r for a sense-preserving map."""
    return winding_count(f, w, r)[0]


def triangular_lattice(r: float, spacing: float) -> np.ndarray:
    rows = int(math.floor(r / (spacing * math.sqrt(3) / 2)))
    cols = int(math.floor(r / spacing)) + 1
    j = np.arange(-rows, rows + 1)
    i = np.arange(-cols, cols + 1)
    y = j * spacing * math.sqrt(3) / 2
    x = i[None, :] * spacing + (j[:, None] % 2) * spacing / 2
    z = (x + 1j * y[:, None]).ravel()
    return z[np.abs(z) <= r]


def _dedup(roots: np.ndarray) -> list[complex]:
    kept = []
    remaining = roots
    while remaining.size:
        z0 = remaining[0]
        kept.append(complex(z0))
        remaining = remaining[np.abs(remaining - z0) >= DEDUP]
    return sorted(kept, key=lambda c: (round(c.real, 9), round(c.imag, 9)))


def newton_solve(f: HarmonicMap, w: complex, seeds: np.ndarray, max_step: float = 0.25):
    """Damped Newton for h(z) + conj(g(z)) = w from every seed.

    Each step solves h' dz + conj(g') conj(dz) = w - f, a real 2x2 system whose
    determinant is the Jacobian |h'|^2 - |g'|^2; Cramer's rule gives
    dz = (conj(h') R - conj(g') conj(R)) / J.  Returns (roots, n_singular, n_seeds).
    """
    z = np.asarray(seeds, dtype=complex).copy()
    n_seeds = z.size
    roots = []
    singular = 0
    for _ in range(MAX_ITER):
        if z.size == 0:
            break
        hj, gj, status = map_jets(f, z)
        ok = status == OK
        R = w - (hj.f0 + np.conj(gj.f0))
        a, b = hj.f1, gj.f1
        J = np.abs(a) ** 2 - np.abs(b) ** 2
        sing = ok & (np.abs(J) <= 1e-300)
        singular += int(sing.sum())
        ok &= ~sing
        z, R, a, b, J = z[ok], R[ok], a[ok], b[ok], J[ok]
        with np.errstate(all="ignore"):
            dz = (np.conj(a) * R - np.conj(b) * np.conj(R)) / J
        done = np.abs(dz) < NEWTON_TOL
        roots.append(z[done] + dz[done])
        z, R, dz = z[~done], R[~done], dz[~done]
        step = np.abs(dz)
        dz = np.where(step > max_step, dz * (max_step / np.maximum(step, 1e-300)), dz)
        res0 = np.abs(R)
        znew = z + dz
        vals, st = _eval_values(f, znew)
        worse = (st != OK) | ~(np.abs(w - vals) <= res0)
        t = 1.0
        for _ in range(10):
            if not np.any(worse):
                break
            t *= 0.5
            idx = np.nonzero(worse)[0]
            znew[idx] = z[idx] + t * dz[idx]
            vals, st_idx = _eval_values(f, znew[idx])
            st[idx] = st_idx
            worse[idx] = (st_idx != OK) | ~(np.abs(w - vals) <= res0[idx])
        # stalled iterates and those that leave the closed disk cannot yield counted roots
        z = znew[(st == OK) & ~worse & (np.abs(znew) <= 1.0)]
    if singular:
        log.debug("%d Newton iterates hit a singular Jacobian and were dropped", singular)
    found = np.concatenate(roots) if roots else np.zeros(0, complex)
    return found, singular, n_seeds


def _eval_values(f, z):
    hj, gj, status = map_jets(f, z)
    return hj.f0 + np.conj(gj.f0), status


def preimages_newton(f: HarmonicMap, w: complex, r: float, seed_budget: int = SEED_BUDGET) -> list[complex]:
    """Distinct Newton roots of f(z) = w inside |z| < r."""
    spacing = (1.0 - r) / 4
    # lattice density is 2/(sqrt(3) s^2); check before building it
    estimate = 2 * math.pi * r * r / (math.sqrt(3) * spacing * spacing)
    if estimate > 1.1 * seed_budget:
        raise SeedBudgetExceeded(f"about {estimate:.0f} seeds exceed the budget of {seed_budget}")
    seeds = triangular_lattice(r, spacing)
    if seeds.size > seed_budget:
        raise SeedBudgetExceeded(f"{seeds.size} seeds exceed the budget of {seed_budget}")
    roots, singular, n_seeds = newton_solve(f, complex(w), seeds)
    if n_seeds and singular == n_seeds:
        raise JacobianSingular(f"all Newton iterates for w={w} hit a singular Jacobian")
    roots = roots[np.abs(roots) < r]
    return _dedup(roots)


def valence_sweep(f: HarmonicMap, r: float, wgrid: dict, crosscheck: bool = True,
                  seed_budget: int = SEED_BUDGET) -> ValenceReport:
    """Winding counts on a target grid with a Newton cross-check per target."""
    if not 0 < r <= R_SWEEP_MAX:
        raise ValueError(f"sweep radius must lie in (0, {R_SWEEP_MAX}]")
    targets = grid_targets(wgrid)
    counts, checks, flags, ncounts = [], [], [], []
    try:
        check_orientation(f, _witness_radius(r))
        oriented = True
    except OrientationViolation:
        oriented = False
    for w in targets:
        if not oriented:
            counts.append(None), checks.append(None), ncounts.append(None)
            flags.append(ORIENTATION)
            continue
        try:
            n, r_used = winding_count(f, w, r)
        except OrientationViolation:
            counts.append(None), checks.append(None), ncounts.append(None)
            flags.append(ORIENTATION)
            continue
        except (HarmvalError, MathDomainError) as exc:
            log.warning("winding failed for w=%s: %s", w, exc)
            counts.append(None), checks.append(None), ncounts.append(None)
            flags.append(FAILED)
            continue
        counts.append(n)
        m = None
        if crosscheck:
            try:
                m = len(preimages_newton(f, w, r_used, seed_budget))
            except (SeedBudgetExceeded, JacobianSingular) as exc:
                log.info("Newton oracle skipped for w=%s: %s", w, exc)
        ncounts.append(m)
        if m is None:
            checks.append(None)
            flags.append(UNCHECKED)
        elif m != n:
            checks.append(False)
            flags.append(MISMATCH)
        else:
            checks.append(True)
            flags.append(PERTURBED if r_used != r else CLEAN)
    valid = [c for c in counts if c is not None]
    return ValenceReport(r, targets, counts, max(valid) if valid else None, checks, flags, ncounts)
