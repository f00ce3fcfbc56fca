#!/usr/bin/env python3
"""Run the four driven-oscillator presets and report the equivalence gap.

Writes one CSV per quench time into a shared output directory, so the
result can be rendered directly by the frontend:

    python scripts/run_fig1_all.py --out out/fig1
    (cd frontend && node dist/cli.js --fig1 ../out/fig1 --out ../out/fig1.svg)
"""

import argparse
import json
import os
import shutil
import sys
import tempfile

from wigner_qsl.cli import main as cli_main

TAUS = ("0.1", "1", "5", "10")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/fig1")
    parser.add_argument("--grid-n", type=int, default=256)
    parser.add_argument("--steps", type=int, default=400)
    args = parser.parse_args()

    os.makedirs(args.out, exist_ok=True)
    for tau in TAUS:
        with tempfile.TemporaryDirectory() as tmp:
            code = cli_main(
                [
                    "fig1",
                    "--preset",
                    f"fig1-tau{tau}",
                    "--out",
                    tmp,
                    "--grid-n",
                    str(args.grid_n),
                    "--steps",
                    str(args.steps),
                ]
            )
            if code != 0:
                print(f"tau={tau}: run failed with exit code {code}", file=sys.stderr)
                return code
            shutil.copy(os.path.join(tmp, f"fig1_tau{tau}.csv"), args.out)
            with open(os.path.join(tmp, "summary.json")) as fh:
                summary = json.load(fh)
        print(
            f"tau={tau}: equivalence max deviation "
            f"{summary['equivalence_max_dev']:.3e}, checks "
            f"{'ok' if summary['checks']['ok'] else 'FAILED'}"
        )
    print(f"CSV files in {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
