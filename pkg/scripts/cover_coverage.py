"""Coverage of the annulus 2*rho - 1 < |zeta| < 1 by rotated copies of a candidate psi, as M grows."""

import argparse
from dataclasses import dataclass

from harmval.cover import CoverFamily, verify_cover
from harmval.expr import parse, to_text
from harmval.sampling import SamplingConfig


@dataclass
class Config:
    psi: str = "0.5 + 0.4*z"
    rho: float = 0.75
    alpha: float = 1.0
    max_m: int = 16
    n_annulus: int = 4096


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--psi", default=Config.psi)
    ap.add_argument("--rho", type=float, default=Config.rho)
    ap.add_argument("--alpha", type=float, default=Config.alpha)
    ap.add_argument("--max-m", type=int, default=Config.max_m)
    args = ap.parse_args()
    cfg = Config(args.psi, args.rho, args.alpha, args.max_m)

    psi = parse(cfg.psi)
    print(f"psi = {to_text(psi)}, rho = {cfg.rho}, annulus {2 * cfg.rho - 1:g} < |zeta| < 1")
    print(f"{'M':>3} {'coverage':>10} {'containment':>12} {'norm':>10} {'injective':>10}")
    for m in range(1, cfg.max_m + 1):
        rep = verify_cover(CoverFamily(psi, m, cfg.rho), cfg.alpha, n_annulus=cfg.n_annulus,
                           config=SamplingConfig(depth=10))
        print(f"{m:3d} {rep.coverage:10.4f} {rep.containment:12.4f} {rep.norm_sup:10.4f} {str(rep.injective):>10}")


if __name__ == "__main__":
    main()
