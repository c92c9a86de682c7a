"""Run every criterion on the test corpus and compare predictions with measured valence.

For each map: becker_harmonic and thm_main verdicts, then the measured
valence on a target grid at two radii.  A satisfied univalence criterion
must measure 1; a satisfied bounded-valence criterion must measure the
same maximum at both radii.
"""

import argparse
import json
import logging
from dataclasses import asdict, dataclass

from harmval.corpus import harmonic_corpus
from harmval.criteria import Criterion, check_all
from harmval.sampling import SamplingConfig
from harmval.valence import valence_sweep


@dataclass
class Config:
    r_inner: float = 1 - 2 ** -8
    r_outer: float = 1 - 2 ** -10
    depth: int = 13
    delta0: float = 0.5


def run(cfg: Config) -> list[dict]:
    rows = []
    for name, (f, grid) in harmonic_corpus().items():
        verdicts = check_all(f, {"delta0": cfg.delta0}, SamplingConfig(depth=cfg.depth),
                             criteria=[Criterion.BECKER_HARMONIC, Criterion.THM_MAIN, Criterion.THM_MAIN2])
        v = {x.criterion.value: x for x in verdicts}
        inner = valence_sweep(f, cfg.r_inner, grid, crosscheck=False).max_count
        outer = valence_sweep(f, cfg.r_outer, grid, crosscheck=False).max_count
        uni = v["becker_harmonic"].satisfied
        bnd = v["thm_main_pre_schwarzian"].satisfied
        consistent = (not uni or (inner == outer == 1)) and (not bnd or inner == outer)
        rows.append({
            "map": name,
            "becker": v["becker_harmonic"].quantity,
            "thm_main": v["thm_main_pre_schwarzian"].quantity,
            "thm_main2": v["thm_main2_schwarzian"].quantity,
            "univalent_predicted": uni,
            "bounded_predicted": bnd,
            "valence_inner": inner,
            "valence_outer": outer,
            "consistent": consistent,
        })
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--depth", type=int, default=Config.depth)
    ap.add_argument("--delta0", type=float, default=Config.delta0)
    ap.add_argument("--json", action="store_true", help="print rows as JSON")
    ap.add_argument("--verbose", action="store_true", help="show per-target winding warnings")
    args = ap.parse_args()
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR)
    cfg = Config(depth=args.depth, delta0=args.delta0)
    rows = run(cfg)
    if args.json:
        print(json.dumps({"config": asdict(cfg), "rows": rows}, indent=2))
        return
    print(f"{'map':18} {'becker':>9} {'thm_main':>9} {'thm_main2':>10} {'pred':>9} {'n_in':>5} {'n_out':>5}  ok")
    for r in rows:
        pred = "univalent" if r["univalent_predicted"] else ("bounded" if r["bounded_predicted"] else "-")
        print(f"{r['map']:18} {r['becker']:9.4f} {r['thm_main']:9.4f} {r['thm_main2']:10.4f} {pred:>9} "
              f"{r['valence_inner']!s:>5} {r['valence_outer']!s:>5}  {'yes' if r['consistent'] else 'NO'}")


if __name__ == "__main__":
    main()
