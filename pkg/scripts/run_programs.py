"""Verdict for every program in programs/, exact and sampled."""

import argparse
from pathlib import Path

from pprog.frontend import load
from pprog.errors import PProgramError
from pprog.pipeline import analyze

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"{'program':<18} {'design':<10} {'exact':<26} sampled (n={args.samples})")
    for path in sorted((ROOT / "programs").glob("*.pp")):
        try:
            vp = load(path.read_text())
        except PProgramError as e:
            print(f"{path.stem:<18} rejected: {type(e).__name__}: {e}")
            continue
        exact = analyze(vp)
        sampled = analyze(vp, samples=args.samples, seed=args.seed)
        print(f"{path.stem:<18} {exact.design:<10} {exact.verdict.kind:<26} {sampled.verdict.kind}")


if __name__ == "__main__":
    main()
