"""Pointwise Schwarzian-type operators and the weighted criterion quantities.

All evaluation goes through the array routines; the scalar functions call
them on one-element arrays so that scalar and sampled results agree bitwise.
In arrays, points where an operator is undefined carry NaN in the complex
channels and +inf in the weighted quantities, so a max-reduction is dominated
by them instead of silently skipping them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DilatationUnimodular, MathDomainError, OutsideDisk, RangeViolation
from .expr import DENOM_EPS, DOMAIN, OK, AnalyticExpr, Jet3, compose, jet_array, raise_for_status
from .harmonic import HarmonicMap, dilatation_from_jets, make_harmonic, map_jets

UNIMODULAR_EPS = 1e-12
UNIMODULAR = 8  # status bit local to this module

CHANNELS = ("pre", "nehari", "becker", "hyp", "dpre")


@dataclass(frozen=True)
class OperatorValues:
    p: complex
    s: complex
    hyp: complex
    becker_q: float
    nehari_q: float
    pre_q: float


def _pre_schwarzian(f1, f2, f3):
    p = f2 / f1
    return p, f3 / f1 - 1.5 * (p * p)


def _weights(z):
    w = 1.0 - np.abs(z) ** 2
    return w, w * w


def _guard_f1(f1, status):
    small = np.abs(f1) < DENOM_EPS
    if np.any(small):
        status |= np.where(small, DOMAIN, OK).astype(status.dtype)
        f1 = np.where(small, 1.0 + 0j, f1)
    return f1


def _poison(vals: OperatorValues, status) -> OperatorValues:
    if not np.any(status):
        return vals
    bad = status != OK
    nan = np.nan + 0j
    return OperatorValues(
        np.where(bad, nan, vals.p),
        np.where(bad, nan, vals.s),
        np.where(bad, nan, vals.hyp),
        np.where(bad, np.inf, vals.becker_q),
        np.where(bad, np.inf, vals.nehari_q),
        np.where(bad, np.inf, vals.pre_q),
    )


def analytic_operator_arrays(jet: Jet3, z, status=None) -> tuple[OperatorValues, np.ndarray]:
    """P = f''/f' and S = f'''/f' - 3/2 (f''/f')^2 with their weighted moduli."""
    z = np.asarray(z, dtype=complex)
    status = np.zeros(z.shape, np.int8) if status is None else status.copy()
    with np.errstate(all="ignore"):
        f1 = _guard_f1(jet.f1, status)
        p, s = _pre_schwarzian(f1, jet.f2, jet.f3)
        w1, w2 = _weights(z)
        pre_q = np.abs(p) * w1
        vals = OperatorValues(p, s, np.zeros_like(p), pre_q, np.abs(s) * w2, pre_q)
    return _poison(vals, status), status


def harmonic_operator_arrays(f: HarmonicMap, z) -> tuple[OperatorValues, np.ndarray]:
    """P_H, S_H, hyperbolic derivative of the dilatation, weighted quantities.

    Where the dilatation jet vanishes identically the classical operators of
    h are returned untouched (no floating-point correction terms).
    """
    z = np.asarray(z, dtype=complex)
    hj, gj, status = map_jets(f, z)
    w0, w1, w2 = dilatation_from_jets(hj, gj, status)
    with np.errstate(all="ignore"):
        h1 = _guard_f1(hj.f1, status)
        ph, sh = _pre_schwarzian(h1, hj.f2, hj.f3)
        den = 1.0 - np.abs(w0) ** 2
        unimodular = den < UNIMODULAR_EPS
        if np.any(unimodular):
            status |= np.where(unimodular, UNIMODULAR, OK).astype(status.dtype)
            den = np.where(unimodular, 1.0, den)
        cw = np.conj(w0) / den
        t = cw * w1
        p = ph - t
        s = sh + cw * (ph * w1 - w2) - 1.5 * (t * t)
        wt1, wt2 = _weights(z)
        hyp = w1 * wt1 / den
        flat = (w0 == 0) & (w1 == 0) & (w2 == 0)
        if np.any(flat):
            p = np.where(flat, ph, p)
            s = np.where(flat, sh, s)
            hyp = np.where(flat, 0j, hyp)
        pre_q = np.abs(p) * wt1
        vals = OperatorValues(p, s, hyp, pre_q + np.abs(hyp), np.abs(s) * wt2, pre_q)
    return _poison(vals, status), status


def _scalar(vals: OperatorValues) -> OperatorValues:
    return OperatorValues(
        complex(vals.p[0]), complex(vals.s[0]), complex(vals.hyp[0]),
        float(vals.becker_q[0]), float(vals.nehari_q[0]), float(vals.pre_q[0]),
    )


def analytic_operators(j: Jet3, z: complex) -> OperatorValues:
    if abs(j.f1) < DENOM_EPS:
        raise MathDomainError(f"|f'(z)| < {DENOM_EPS:g} at z={z}: not locally univalent")
    arr = Jet3(*(np.array([c], dtype=complex) for c in j.as_tuple()))
    vals, _ = analytic_operator_arrays(arr, np.array([complex(z)]))
    return _scalar(vals)


def harmonic_operators(f: HarmonicMap, z: complex) -> OperatorValues:
    z = complex(z)
    if abs(z) >= 1:
        raise OutsideDisk(f"point {z} is not in the open unit disk")
    vals, status = harmonic_operator_arrays(f, np.array([z]))
    code = int(status[0])
    if code & UNIMODULAR:
        raise DilatationUnimodular(f"1 - |omega|^2 < {UNIMODULAR_EPS:g} at z={z}")
    raise_for_status(code & ~UNIMODULAR, z)
    return _scalar(vals)


# --------------------------------------------------------------------------
# weighted quantities for sampling


def _derivative_pre(jet: Jet3, z, status):
    """|P'|(1-|z|^2)^2 with P' = f'''/f' - (f''/f')^2."""
    with np.errstate(all="ignore"):
        f1 = _guard_f1(jet.f1, status)
        p = jet.f2 / f1
        dp = jet.f3 / f1 - p * p
        q = np.abs(dp) * _weights(z)[1]
    return np.where(status != OK, np.inf, q)


def _check_channels(f, channels):
    for channel in channels:
        if channel not in CHANNELS:
            raise ValueError(f"unknown channel {channel!r}; choose from {CHANNELS}")
        if channel == "dpre" and not isinstance(f, AnalyticExpr):
            raise ValueError("channel 'dpre' is defined for analytic expressions only")


def _channel_rows(f, channels, z) -> list[np.ndarray]:
    z = np.asarray(z, dtype=complex)
    if isinstance(f, AnalyticExpr):
        jet, status = jet_array(f, z)
        rows = []
        vals = None
        for channel in channels:
            if channel == "dpre":
                rows.append(_derivative_pre(jet, z, status.copy()))
                continue
            if vals is None:
                vals, _ = analytic_operator_arrays(jet, z, status.copy())
            if channel == "hyp":
                rows.append(np.where(np.isinf(vals.pre_q), np.inf, 0.0))
            else:
                rows.append(getattr(vals, f"{channel}_q"))
        return rows
    vals, _ = harmonic_operator_arrays(f, z)
    return [np.where(np.isnan(vals.hyp), np.inf, np.abs(vals.hyp)) if channel == "hyp"
            else getattr(vals, f"{channel}_q") for channel in channels]


def weighted_quantity(f, channel: str) -> Callable[[np.ndarray], np.ndarray]:
    """Pointwise real quantity on arrays of points for a map or an analytic expression.

    Channels: ``pre`` |P|(1-|z|^2), ``nehari`` |S|(1-|z|^2)^2, ``becker``
    pre + |omega*|, ``hyp`` |omega*|, ``dpre`` |P'|(1-|z|^2)^2 (analytic only).
    """
    _check_channels(f, (channel,))
    return lambda z: _channel_rows(f, (channel,), z)[0]


def weighted_quantities(f, channels) -> Callable[[np.ndarray], np.ndarray]:
    """Several channels from one operator evaluation, stacked as rows."""
    channels = tuple(channels)
    _check_channels(f, channels)
    return lambda z: np.stack(_channel_rows(f, channels, z))


# --------------------------------------------------------------------------
# chain rules


def compose_map(f: HarmonicMap, phi: AnalyticExpr) -> HarmonicMap:
    """F = f o phi as a harmonic map with dilatation omega o phi."""
    return make_harmonic(compose(f.h, phi), compose(f.g, phi), f"{f.label} o phi")


def chain_rule_residual(f: HarmonicMap, phi: AnalyticExpr, z: complex) -> tuple[float, float, float]:
    """Residuals of the pre-Schwarzian and Schwarzian chain rules at z and the
    hyperbolic chain gap |omega_F*(z)| - |omega*(phi(z))| (non-positive in theory)."""
    z = complex(z)
    pj, status = jet_array(phi, np.array([z]))
    raise_for_status(int(status[0]), z)
    w = complex(pj.f0[0])
    if abs(w) >= 1:
        raise RangeViolation(f"|phi(z)| = {abs(w):.6g} >= 1 at z={z}")
    d1, d2, d3 = complex(pj.f1[0]), complex(pj.f2[0]), complex(pj.f3[0])
    if abs(d1) < DENOM_EPS:
        raise MathDomainError(f"phi'(z) vanishes at z={z}")
    F = compose_map(f, phi)
    lhs = harmonic_operators(F, z)
    rhs = harmonic_operators(f, w)
    pphi = d2 / d1
    sphi = d3 / d1 - 1.5 * pphi * pphi
    pre_res = abs(lhs.p - (rhs.p * d1 + pphi))
    sch_res = abs(lhs.s - (rhs.s * d1 * d1 + sphi))
    hyp_gap = abs(lhs.hyp) - abs(rhs.hyp)
    return pre_res, sch_res, hyp_gap
