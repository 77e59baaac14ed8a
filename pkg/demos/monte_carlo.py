"""Estimate the share of sampled pairs of Gamma_n settled by the homogeneity and v_max routes."""

import argparse

from klideals.sampler import TrialConfig, estimate_success


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 5, 6, 7])
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=None)
    args = ap.parse_args()
    print(f"{'n':>3} {'success %':>10} {'95% CI':>16} {'mean rejections':>16}")
    for n in args.sizes:
        rep = estimate_success(TrialConfig(n, args.trials, args.seed), jobs=args.jobs)
        lo, hi = rep.ci
        print(f"{n:>3} {rep.pct:>10.2f} {f'{lo:.2f}-{hi:.2f}':>16} {rep.mean_rejections:>16.3f}")


if __name__ == "__main__":
    main()
