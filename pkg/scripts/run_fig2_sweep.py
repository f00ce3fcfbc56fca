#!/usr/bin/env python3
"""Run the damped-oscillator experiment and the inverse-temperature sweep.

Each run gets its own output directory (so the config echo stays 1:1):

    python scripts/run_fig2_sweep.py --out out
    (cd frontend && node dist/cli.js --fig2 ../out/fig2 \
        --sweep ../out/sweep/beta_sweep.csv --out ../out/fig2.svg)

The sweep's low-temperature end is refused by design (negative momentum
diffusion); expect a warning and a nan row there.
"""

import argparse
import json
import os
import sys

from wigner_qsl.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out")
    parser.add_argument("--grid-n", type=int, default=256)
    args = parser.parse_args()

    fig2_dir = os.path.join(args.out, "fig2")
    code = cli_main(
        ["fig2", "--preset", "fig2", "--out", fig2_dir, "--grid-n", str(args.grid_n)]
    )
    if code != 0:
        return code
    with open(os.path.join(fig2_dir, "summary.json")) as fh:
        summary = json.load(fh)
    print(
        f"fig2: tau_qsl_w={summary['tau_qsl_w']:.6g}, "
        f"normalization drift {summary['max_norm_drift']:.2e}"
    )

    sweep_dir = os.path.join(args.out, "sweep")
    code = cli_main(["sweep-beta", "--preset", "beta-sweep", "--out", sweep_dir])
    if code != 0:
        return code
    with open(os.path.join(sweep_dir, "summary.json")) as fh:
        summary = json.load(fh)
    for row in summary["rows"]:
        if row["refused"]:
            print(f"beta={row['beta']:g}: refused ({row['reason']})")
        else:
            print(f"beta={row['beta']:g}: tau_qsl_w={row['tau_qsl_w']:.6g}")
    print(
        "monotone decreasing with temperature:",
        summary["monotone_decreasing_with_temperature"],
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
