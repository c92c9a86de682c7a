"""Checks for rotation families covering an annulus, and derivative growth bounds.

A cover family is a univalent self-map ``psi`` of the disk with rotations
``psi_k = e^{2 pi i k / M} psi``, k = 1..M, meant to cover the annulus
``2 rho - 1 < |zeta| < 1`` while keeping ``sup |psi''/psi'| (1 - |z|^2)`` below
a given alpha.  Nothing here constructs such a family; it measures how well a
supplied candidate does.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import qmc

from .errors import RangeViolation
from .expr import OK, AnalyticExpr, as_expr, jet_array, raise_for_status
from .operators import weighted_quantities, weighted_quantity
from .sampling import R_CLIP, SamplingConfig, radial_profiles, sup_from_profile, sup_norm

INJ_GAP = 1e-10
INJ_SEP = 1e-6
PREIMAGE_TOL = 1e-10
GROWTH_TOL = 1e-9
NEWTON_CLIP = 1.0 - 1e-12


@dataclass(frozen=True)
class CoverFamily:
    psi: AnalyticExpr
    m: int
    rho: float

    def __post_init__(self):
        if not 0.5 < self.rho < 1:
            raise ValueError(f"rho must lie in (1/2, 1), got {self.rho}")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m}")

    @property
    def q(self) -> float:
        return 2 * self.rho - 1

    def rotations(self) -> np.ndarray:
        k = np.arange(1, self.m + 1)
        return np.exp(2j * np.pi * k / self.m)

    @classmethod
    def from_spec(cls, spec: dict) -> "CoverFamily":
        return cls(as_expr(spec["psi"]), int(spec["m"]), float(spec["rho"]))


@dataclass(frozen=True)
class CoverReport:
    injective: bool
    min_image_gap: float
    norm_sup: float
    norm_ok: bool
    coverage: float
    containment: float
    alpha: float
    m: int
    rho: float

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GrowthReport:
    alpha_hat: float
    dpre_sup: float
    schwarz_sup: float
    dpre_ok: bool
    schwarz_ok: bool

    @property
    def passed(self) -> bool:
        return self.dpre_ok and self.schwarz_ok

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _halton(n: int, d: int) -> np.ndarray:
    return qmc.Halton(d=d, scramble=False).random(n)


def disk_points(u: np.ndarray, v: np.ndarray, rmax: float = R_CLIP) -> np.ndarray:
    """Area-uniform map of the unit square onto |z| <= rmax."""
    return rmax * np.sqrt(u) * np.exp(2j * np.pi * v)


def annulus_points(n: int, q: float) -> np.ndarray:
    uv = _halton(n + 1, 2)[1:]
    r = np.sqrt(q * q + uv[:, 0] * (1 - q * q))
    return r * np.exp(2j * np.pi * uv[:, 1])


def _values(psi, z):
    jet, status = jet_array(psi, z)
    if np.any(status):
        k = int(np.argmax(status != OK))
        raise_for_status(int(status[k]), complex(z[k]))
    return jet.f0


def _seed_table(psi, n_rad: int = 48, n_ang: int = 96):
    rad = R_CLIP * np.sqrt((np.arange(n_rad) + 0.5) / n_rad)
    ang = 2 * np.pi * np.arange(n_ang) / n_ang
    z = np.concatenate([[0j], (rad[:, None] * np.exp(1j * ang)[None, :]).ravel()])
    jet, status = jet_array(psi, z)
    ok = status == OK
    z, w = z[ok], jet.f0[ok]
    return z, cKDTree(np.column_stack([w.real, w.imag]))


def _has_preimage(psi, targets: np.ndarray, seeds_z, tree, k_nearest: int = 4,
                  max_iter: int = 60) -> np.ndarray:
    """Newton for psi(z) = t from the seeds whose images lie nearest to t."""
    k_nearest = min(k_nearest, len(seeds_z))
    _, idx = tree.query(np.column_stack([targets.real, targets.imag]), k=k_nearest)
    idx = np.asarray(idx).reshape(len(targets), k_nearest)
    z = seeds_z[idx].ravel()
    t = np.repeat(targets, k_nearest)
    owner = np.repeat(np.arange(len(targets)), k_nearest)
    found = np.zeros(len(targets), bool)
    for _ in range(max_iter):
        jet, status = jet_array(psi, z)
        ok = status == OK
        with np.errstate(all="ignore"):
            res = jet.f0 - t
            step = res / jet.f1
        good = ok & (np.abs(res) < PREIMAGE_TOL)
        found[owner[good]] = True
        keep = ok & ~good & np.isfinite(step) & ~found[owner]
        z, t, owner, step = z[keep], t[keep], owner[keep], step[keep]
        if z.size == 0:
            break
        z = z - step
        mod = np.abs(z)
        out = mod >= 1.0
        z = np.where(out, z * (NEWTON_CLIP / np.maximum(mod, 1e-300)), z)
    return found


def verify_cover(c: CoverFamily, alpha: float, n_annulus: int = 4096, n_pairs: int = 2048,
                 config: SamplingConfig | None = None) -> CoverReport:
    """Measure injectivity, the pre-Schwarzian bound, coverage and containment."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    psi = c.psi
    q = c.q

    uv = _halton(n_annulus + 1, 2)[1:]
    zs = disk_points(uv[:, 0], uv[:, 1])
    images = _values(psi, zs)
    if np.any(np.abs(images) >= 1):
        k = int(np.argmax(np.abs(images)))
        raise RangeViolation(f"|psi(z)| = {abs(images[k]):.6g} >= 1 at z={zs[k]}: not a self-map")
    mod = np.abs(images)
    containment = float(np.mean((mod > q) & (mod < 1)))

    pts = _halton(n_pairs + 1, 4)[1:]
    z1 = disk_points(pts[:, 0], pts[:, 1])
    z2 = disk_points(pts[:, 2], pts[:, 3])
    sep = np.abs(z1 - z2) > INJ_SEP
    gaps = np.abs(_values(psi, z1) - _values(psi, z2))[sep]
    min_gap = float(gaps.min()) if gaps.size else math.inf
    injective = bool(min_gap >= INJ_GAP)

    norm = sup_norm(weighted_quantity(psi, "pre"), config=config).value

    targets = annulus_points(n_annulus, q)
    seeds_z, tree = _seed_table(psi)
    covered = np.zeros(len(targets), bool)
    for rot in c.rotations():
        todo = ~covered
        if not np.any(todo):
            break
        covered[todo] |= _has_preimage(psi, targets[todo] * np.conj(rot), seeds_z, tree)
    coverage = float(np.mean(covered))

    return CoverReport(injective, min_gap, norm, bool(norm < alpha), coverage, containment,
                       float(alpha), c.m, c.rho)


def derivative_growth_check(f: AnalyticExpr, config: SamplingConfig | None = None) -> GrowthReport:
    """Measure alpha = sup |P(f)|(1-|z|^2) and test the growth bounds it implies:
    sup |P(f)'|(1-|z|^2)^2 <= 4 alpha and sup |S(f)|(1-|z|^2)^2 <= 4 alpha + alpha^2/2."""
    f = as_expr(f)
    config = config or SamplingConfig()
    channels = ("pre", "dpre", "nehari")
    profiles = radial_profiles(weighted_quantities(f, channels), config)
    a, d, s = (sup_from_profile(weighted_quantity(f, c), p).value for c, p in zip(channels, profiles))
    return GrowthReport(a, d, s, bool(d <= 4 * a + GROWTH_TOL), bool(s <= 4 * a + a * a / 2 + GROWTH_TOL))
