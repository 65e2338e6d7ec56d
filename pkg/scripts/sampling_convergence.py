"""Worst cell error of sampled p-tables against the exact ones, per sample
size, next to the 99% Hoeffding bound."""

import argparse
from pathlib import Path

from pprog.evaluator import eval_exact, eval_sampled
from pprog.frontend import load
from pprog.joiner import hoeffding_epsilon

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("program", nargs="?", default=str(ROOT / "programs" / "coins_acyclic.pp"))
    ap.add_argument("--seeds", type=int, default=20)
    args = ap.parse_args()
    vp = load(Path(args.program).read_text())
    exact = {c.name: eval_exact(c) for c in vp.contexts}
    print(f"{'n':>8} {'bound':>9} {'worst error':>12} {'cells over':>11}")
    for n in (100, 1_000, 10_000, 100_000):
        worst, over, cells = 0.0, 0, 0
        for seed in range(args.seeds):
            for c in vp.contexts:
                t = eval_sampled(c, n, seed)
                for key, p in t.rows.items():
                    err = abs(p - float(exact[c.name].rows[key]))
                    worst = max(worst, err)
                    over += err > hoeffding_epsilon(n)
                    cells += 1
        print(f"{n:>8} {hoeffding_epsilon(n):9.5f} {worst:12.5f} {over:>5}/{cells}")


if __name__ == "__main__":
    main()
