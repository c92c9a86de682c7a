"""Planar harmonic mappings ``f = h + conj(g)`` in canonical representation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import MathDomainError, OrientationError, OutsideDisk
from .expr import DENOM_EPS, DOMAIN, OK, AnalyticExpr, Const, as_expr, eval_jet, jet_array, raise_for_status, to_text


@dataclass(frozen=True)
class HarmonicMap:
    """Canonical pair (h, g) with g(0) = 0; use :func:`make_harmonic`."""

    h: AnalyticExpr
    g: AnalyticExpr
    label: str = ""

    def to_spec(self) -> dict:
        return {"label": self.label, "h": to_text(self.h), "g": to_text(self.g)}


@dataclass(frozen=True)
class DilatationJet:
    w0: complex
    w1: complex
    w2: complex


class PointValue(NamedTuple):
    value: complex
    jacobian: float
    negative_jacobian: bool


def make_harmonic(h, g, label: str = "") -> HarmonicMap:
    """Build the canonical representation, shifting g so that g(0) = 0.

    Raises OrientationError unless the map preserves orientation at the
    origin.  A common critical point ``h'(0) = g'(0) = 0`` (a branch point
    such as ``z^3``) is admitted; the sampled Jacobian sign is monitored later.
    """
    h, g = as_expr(h), as_expr(g)
    hj = eval_jet(h, 0j)
    gj = eval_jet(g, 0j)
    if gj.f0 != 0:
        g = g - Const(gj.f0)
    a, b = abs(hj.f1), abs(gj.f1)
    branch_point = a == 0 and b == 0
    if not branch_point and a <= b:
        raise OrientationError(
            f"|h'(0)| = {a:.6g} <= |g'(0)| = {b:.6g}: map is not orientation preserving at 0"
        )
    return HarmonicMap(h, g, label)


def from_spec(spec: dict) -> HarmonicMap:
    """Build from a map-spec object ``{"label", "h", "g"}``."""
    return make_harmonic(as_expr(spec["h"]), as_expr(spec.get("g", "0")), spec.get("label", ""))


def map_jets(f: HarmonicMap, z):
    """Jets of h and g at an array of points plus the combined status."""
    hj, hs = jet_array(f.h, z)
    gj, gs = jet_array(f.g, z)
    return hj, gj, hs | gs


def dilatation_from_jets(hj, gj, status):
    """omega = g'/h' and its first two derivatives by quotient differentiation."""
    b0, b1, b2 = hj.f1, hj.f2, hj.f3
    a0, a1, a2 = gj.f1, gj.f2, gj.f3
    small = np.abs(b0) < DENOM_EPS
    if np.any(small):
        status |= np.where(small, DOMAIN, OK).astype(status.dtype)
        b0 = np.where(small, 1.0 + 0j, b0)
    with np.errstate(all="ignore"):
        w0 = a0 / b0
        w1 = (a1 - w0 * b1) / b0
        w2 = (a2 - 2 * w1 * b1 - w0 * b2) / b0
    return w0, w1, w2


def dilatation_jet(f: HarmonicMap, z: complex) -> DilatationJet:
    z = complex(z)
    if abs(z) >= 1:
        raise OutsideDisk(f"point {z} is not in the open unit disk")
    hj, gj, status = map_jets(f, np.array([z]))
    raise_for_status(int(status[0]), z)
    w0, w1, w2 = dilatation_from_jets(hj, gj, status)
    if status[0]:
        raise MathDomainError(f"|h'(z)| < {DENOM_EPS:g} at z={z}: h is not locally univalent")
    return DilatationJet(complex(w0[0]), complex(w1[0]), complex(w2[0]))


def values_array(f: HarmonicMap, z):
    """Values h + conj(g), Jacobians |h'|^2 - |g'|^2 and status at points."""
    hj, gj, status = map_jets(f, z)
    value = hj.f0 + np.conj(gj.f0)
    jac = np.abs(hj.f1) ** 2 - np.abs(gj.f1) ** 2
    return value, jac, status


def eval_point(f: HarmonicMap, z: complex) -> PointValue:
    """Value and Jacobian at ``z``; a non-positive Jacobian is flagged, not raised."""
    z = complex(z)
    if abs(z) >= 1:
        raise OutsideDisk(f"point {z} is not in the open unit disk")
    value, jac, status = values_array(f, np.array([z]))
    raise_for_status(int(status[0]), z)
    j = float(jac[0])
    return PointValue(complex(value[0]), j, j <= 0)


def is_analytic(f: HarmonicMap, n: int = 64) -> bool:
    """True when g' vanishes at a fixed spread of sample points."""
    k = np.arange(n)
    z = 0.9 * np.sqrt((k + 0.5) / n) * np.exp(2j * np.pi * k * 0.6180339887498949)
    gj, status = jet_array(f.g, z)
    ok = status == OK
    return bool(np.all(np.abs(gj.f1[ok]) <= DENOM_EPS))
