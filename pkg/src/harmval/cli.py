"""Command-line front end.

    harmval analyze  MAP.json  [--delta0 D] [--r0 R]
    harmval criteria MAP.json  --delta0 D [--r0 R] [--criterion NAME ...]
    harmval valence  MAP.json  --grid re LO,HI,N im LO,HI,N [--radius R]
    harmval cover-verify COVER.json --alpha A
    harmval sweep    MAP.json  [--quantity becker]      (profile CSV)

Exit codes: 0 ran (whatever the verdicts), 1 usage, 2 input spec error,
3 every requested output was poisoned by math-domain failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass

from .cover import CoverFamily, derivative_growth_check, verify_cover
from .criteria import Criterion, check_all
from .expr import to_text
from .errors import HarmvalError, MathDomainError, MissingParam, OrientationError, ParseError, RangeViolation
from .harmonic import from_spec, is_analytic
from .operators import weighted_quantities, weighted_quantity
from .sampling import SamplingConfig, radial_profile, radial_profiles, sup_from_profile
from .valence import R_SWEEP_MAX, valence_sweep

COMMANDS = ("analyze", "valence", "criteria", "cover-verify", "sweep")
EXIT_USAGE, EXIT_SPEC, EXIT_DOMAIN = 1, 2, 3


@dataclass
class RunConfig:
    command: str
    input_path: str
    out_path: str | None = None
    delta0: float | None = None
    radius: float | None = None
    grid: dict | None = None
    ladder_depth: int = 13
    base_angular: int = 256
    r0: float | None = None
    alpha: float | None = None
    quantity: str = "becker"
    criteria: list[str] | None = None
    crosscheck: bool = True

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if not 6 <= self.ladder_depth <= 20:
            raise UsageError("--ladder-depth must lie in [6, 20]")
        if self.base_angular < 16:
            raise UsageError("--angular-base must be at least 16")
        if self.command == "criteria":
            wanted = self.criteria or [c.value for c in Criterion]
            if Criterion.THM_MAIN2.value in wanted and self.delta0 is None:
                raise UsageError("criteria needs --delta0 (its sharp value is unknown; no default)")
        if self.radius is not None and not 0 < self.radius <= R_SWEEP_MAX:
            raise UsageError(f"--radius must lie in (0, {R_SWEEP_MAX}]")
        if self.command == "valence" and self.grid is None:
            raise UsageError("valence needs --grid re LO,HI,N im LO,HI,N")

    def sampling(self) -> SamplingConfig:
        return SamplingConfig(depth=self.ladder_depth, base_n=self.base_angular)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# deterministic JSON with 17 significant digits


def _num(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def dumps(obj, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag], indent)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, bool)) or v is None for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return dumps(obj.item(), indent)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# --------------------------------------------------------------------------
# commands


def _load(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("spec must be a JSON object")
    return data


def _profile_dict(channel, prof) -> dict:
    return {
        "channel": channel,
        "radius": prof.radii,
        "sup": prof.sups,
        "samples": prof.angular_counts,
        "converged": prof.refined,
    }


def _analyze(cfg: RunConfig, spec: dict):
    f = from_spec(spec)
    sampling = cfg.sampling()
    channels = ("pre", "nehari", "hyp", "becker")
    norms, profiles, cache = {}, [], {}
    # one operator pass for all channels; per-channel results match single runs
    all_profs = radial_profiles(weighted_quantities(f, channels), sampling)
    for channel, prof in zip(channels, all_profs):
        est = sup_from_profile(weighted_quantity(f, channel), prof)
        cache[channel] = (prof, est)
        norms[channel] = {
            "value": est.value,
            "attained_at": est.attained_at,
            "samples_used": est.samples_used,
            "converged": est.converged,
        }
        profiles.append(_profile_dict(channel, prof))
    params = {k: v for k, v in (("delta0", cfg.delta0), ("r0", cfg.r0)) if v is not None}
    verdicts = check_all(f, params, sampling, profile_cache=cache)
    report = {
        "label": f.label,
        "analytic": is_analytic(f),
        "operators": {"sup_norms": norms},
        "profiles": profiles,
        "verdicts": [v.to_dict() for v in verdicts],
    }
    poisoned = all(math.isinf(n["value"]) for n in norms.values())
    return report, poisoned


def _criteria(cfg: RunConfig, spec: dict):
    f = from_spec(spec)
    wanted = cfg.criteria or [c.value for c in Criterion]
    analytic = is_analytic(f)
    run, skipped = [], []
    for name in wanted:
        c = Criterion(name)
        if c in (Criterion.BECKER_ANALYTIC, Criterion.NEHARI_ANALYTIC, Criterion.SCHWARZ_ANNULUS) \
                and not analytic:
            skipped.append({"criterion": c.value, "reason": "analytic criterion; g is not identically 0"})
        elif c is Criterion.SCHWARZ_ANNULUS and cfg.r0 is None:
            skipped.append({"criterion": c.value, "reason": "needs --r0"})
        else:
            run.append(c)
    params = {k: v for k, v in (("delta0", cfg.delta0), ("r0", cfg.r0)) if v is not None}
    verdicts = check_all(f, params, cfg.sampling(), criteria=run)
    report = {"label": f.label, "verdicts": [v.to_dict() for v in verdicts]}
    if skipped:
        report["skipped"] = skipped
    poisoned = bool(verdicts) and all(math.isinf(v.quantity) for v in verdicts)
    return report, poisoned


def _valence(cfg: RunConfig, spec: dict):
    f = from_spec(spec)
    r = 0.9 if cfg.radius is None else cfg.radius
    rep = valence_sweep(f, r, cfg.grid, crosscheck=cfg.crosscheck)
    return {"label": f.label, "valence": rep.to_dict()}, rep.max_count is None


def _cover(cfg: RunConfig, spec: dict):
    fam = CoverFamily.from_spec(spec)
    alpha = cfg.alpha if cfg.alpha is not None else spec.get("alpha")
    if alpha is None:
        raise UsageError("cover-verify needs --alpha (or an \"alpha\" key in the cover spec)")
    sampling = cfg.sampling()
    rep = verify_cover(fam, float(alpha), config=sampling)
    growth = derivative_growth_check(fam.psi, sampling)
    cover = rep.to_dict()
    cover["psi"] = to_text(fam.psi)
    cover["growth"] = growth.to_dict()
    return {"label": spec.get("label", ""), "cover": cover}, False


def _sweep(cfg: RunConfig, spec: dict):
    f = from_spec(spec)
    prof = radial_profile(weighted_quantity(f, cfg.quantity), cfg.sampling())
    return prof.to_csv(), all(math.isinf(s) for s in prof.sups)


_HANDLERS = {
    "analyze": _analyze,
    "criteria": _criteria,
    "valence": _valence,
    "cover-verify": _cover,
    "sweep": _sweep,
}


def run(cfg: RunConfig) -> int:
    try:
        cfg.validate()
    except UsageError as exc:
        print(f"harmval: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        spec = _load(cfg.input_path)
    except (OSError, ValueError) as exc:
        print(f"harmval: cannot read spec {cfg.input_path}: {exc}", file=sys.stderr)
        return EXIT_SPEC
    try:
        result, poisoned = _HANDLERS[cfg.command](cfg, spec)
    except (UsageError, MissingParam) as exc:
        print(f"harmval: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MathDomainError, RangeViolation) as exc:
        print(f"harmval: math-domain failure: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ParseError, OrientationError, KeyError, TypeError, ValueError) as exc:
        print(f"harmval: bad spec: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except HarmvalError as exc:
        print(f"harmval: math-domain failure: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    if isinstance(result, str):
        text = result
    else:
        # the destination is not part of the computation; keep it out so the
        # same run written to two places yields identical bytes
        config = {k: v for k, v in asdict(cfg).items() if k != "out_path"}
        body = {"label": result.pop("label", ""), "config": config}
        body.update(result)
        text = dumps(body) + "\n"
    if cfg.out_path:
        with open(cfg.out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_DOMAIN if poisoned else 0


# --------------------------------------------------------------------------
# argument parsing


def _split_grid(argv: list[str]) -> tuple[list[str], list[str] | None]:
    """Pull ``--grid re LO,HI,N im LO,HI,N`` out before argparse sees the
    negative numbers in it."""
    if "--grid" not in argv:
        return argv, None
    i = argv.index("--grid")
    return argv[:i] + argv[i + 5:], argv[i + 1:i + 5]


def _parse_grid(tokens: list[str]) -> dict:
    if len(tokens) != 4 or tokens[0] != "re" or tokens[2] != "im":
        raise UsageError("--grid expects: re LO,HI,N im LO,HI,N")
    out = {}
    for key, spec in ((tokens[0], tokens[1]), (tokens[2], tokens[3])):
        parts = spec.split(",")
        if len(parts) != 3:
            raise UsageError(f"bad grid axis {spec!r}; expected LO,HI,N")
        try:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise UsageError(f"bad grid axis {spec!r}: {exc}") from None
        if n < 1 or hi < lo:
            raise UsageError(f"bad grid axis {spec!r}")
        out[key] = [lo, hi, n]
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="harmval", description="Schwarzian-type criteria and valence of harmonic maps on the disk")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="map-spec or cover-spec JSON file")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--delta0", type=float)
    p.add_argument("--radius", type=float)
    p.add_argument("--ladder-depth", type=int, default=13)
    p.add_argument("--angular-base", type=int, default=256)
    p.add_argument("--r0", type=float, help="inner radius for schwarz_annulus")
    p.add_argument("--alpha", type=float, help="pre-Schwarzian bound for cover-verify")
    p.add_argument("--quantity", default="becker", choices=("pre", "nehari", "becker", "hyp"))
    p.add_argument("--criterion", action="append", choices=[c.value for c in Criterion])
    p.add_argument("--no-crosscheck", action="store_true", help="skip the Newton oracle in valence")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(argv: list[str]) -> RunConfig:
    argv, grid_tokens = _split_grid(list(argv))
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    return RunConfig(
        command=ns.command,
        input_path=ns.input,
        out_path=ns.out,
        delta0=ns.delta0,
        radius=ns.radius,
        grid=_parse_grid(grid_tokens) if grid_tokens is not None else None,
        ladder_depth=ns.ladder_depth,
        base_angular=ns.angular_base,
        r0=ns.r0,
        alpha=ns.alpha,
        quantity=ns.quantity,
        criteria=ns.criterion,
        crosscheck=not ns.no_crosscheck,
    )


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"harmval: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
