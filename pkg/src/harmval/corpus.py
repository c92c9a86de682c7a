"""Named test maps and expressions used by the test suite and the scripts."""

from __future__ import annotations

import cmath

from .expr import Z, AnalyticExpr, Call, Const, automorphism, parse
from .harmonic import HarmonicMap, make_harmonic

# expressions exercising every builtin and node type
BUILTIN_EXPRESSIONS = {
    "koebe": "koebe(z)",
    "exp": "exp(z)",
    "log": "log(1+z)",
    "cubic": "z^3 - 2*z + 0.5i",
    "mobius": "(z+0.3)/(1+0.3*z)",
}

# locally univalent analytic functions on the disk
ANALYTIC_CORPUS = {
    "identity": "z",
    "koebe": "koebe(z)",
    "koebe_half": "koebe(z/2)",
    "exp_small": "exp(0.1*z)",
    "exp": "exp(z)",
    "log1p": "log(1+z)",
    "halfplane": "z/(1-z)",
    "strip": "z/(1-z^2)",
    "mobius": "(z+0.3)/(1+0.3*z)",
    "quadratic": "z + 0.3*z^2",
    "parabolic": "z - z^2/2",
}


def dilatation_automorphism_map(a: complex, theta: float = 0.0, label: str = "") -> HarmonicMap:
    """h = z with dilatation omega = e^{i theta}(z - a)/(1 - conj(a) z).

    g is the primitive of omega: for a != 0,
    g = e^{i theta} (-z/conj(a) - (1/conj(a) - a)/conj(a) * log(1 - conj(a) z)).
    """
    a = complex(a)
    rot = cmath.exp(1j * theta)
    if a == 0:
        g = Const(rot / 2) * Z ** 2
    else:
        ab = a.conjugate()
        g = Const(rot) * (Const(-1 / ab) * Z - Const((1 / ab - a) / ab) * Call("log", Const(1) - Const(ab) * Z))
    return make_harmonic(Z, g, label or f"auto-dilatation a={a} theta={theta}")


def _grid(re, im):
    return {"re": list(re), "im": list(im)}


def harmonic_corpus() -> dict[str, tuple[HarmonicMap, dict]]:
    """name -> (map, target grid sitting inside the image of the disk)."""
    maps = {
        "identity": (make_harmonic("z", "0", "identity"), _grid((-0.5, 0.5, 5), (-0.5, 0.5, 5))),
        "affine": (make_harmonic("z", "0.5*z", "affine"), _grid((-0.4, 0.4, 5), (-0.2, 0.2, 5))),
        "omega_z": (make_harmonic("z", "z^2/2", "omega_z"), _grid((-0.4, 0.4, 5), (-0.4, 0.4, 5))),
        "omega_z2": (make_harmonic("z", "z^3/3", "omega_z2"), _grid((-0.4, 0.4, 5), (-0.4, 0.4, 5))),
        "koebe": (make_harmonic("koebe(z)", "0", "koebe"), _grid((-0.2, 0.5, 5), (-0.3, 0.3, 5))),
        "cube": (make_harmonic("z^3", "0", "cube"), _grid((-0.25, 0.25, 5), (-0.25, 0.25, 5))),
        "exp_small": (make_harmonic("exp(0.3*z)", "0", "exp_small"), _grid((0.9, 1.1, 5), (-0.1, 0.1, 5))),
        "exp4": (make_harmonic("exp(4*z)", "0", "exp4"), _grid((-3.0, -0.2, 5), (-0.4, 0.4, 5))),
        "shear": (make_harmonic("z + 0.2*z^2", "0.1*z^2", "shear"), _grid((-0.4, 0.4, 5), (-0.4, 0.4, 5))),
        "harmonic_koebe": (
            make_harmonic("(z - z^2/2 + z^3/6)/(1-z)^3", "(z^2/2 + z^3/6)/(1-z)^3", "harmonic_koebe"),
            _grid((-0.1, 0.6, 5), (-0.4, 0.4, 5)),
        ),
        "const_dilatation": (
            make_harmonic("(z+0.3)/(1+0.3*z)", "0.3*(z+0.3)/(1+0.3*z)", "const_dilatation"),
            _grid((-0.3, 0.3, 5), (-0.3, 0.3, 5)),
        ),
        "auto_dilatation": (dilatation_automorphism_map(0.5, 0.0, "auto_dilatation"),
                            _grid((-0.4, 0.4, 5), (-0.4, 0.4, 5))),
    }
    return maps


def disk_automorphisms() -> list[AnalyticExpr]:
    return [
        automorphism(0.0, 0.7),
        automorphism(0.3, 0.0),
        automorphism(-0.2 + 0.25j, 1.3),
        automorphism(0.4j, -2.0),
        automorphism(0.45 - 0.1j, 2.9),
    ]


def analytic_expr(name: str) -> AnalyticExpr:
    return parse(ANALYTIC_CORPUS[name])
