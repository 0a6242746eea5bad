#!/usr/bin/env python3
"""eta0 sweep over the experimental schedules using the lmopt CLI.

Runs `lmopt verify` first and stops if it fails. Traces land in --out as
<variant>_b<batch>_eta<eta0>_s<seed>.csv; a summary of mean final running
minima per (variant, eta0) is printed and written to summary.json.
"""

import argparse
import json
import statistics
import subprocess
import sys
from pathlib import Path

ETAS = ["1e-3", "3e-3", "1e-2", "3e-2", "0.1", "0.3", "1"]


def last_row(csv_path: Path) -> dict:
    lines = csv_path.read_text().strip().splitlines()
    header = lines[0].split(",")
    return dict(zip(header, map(float, lines[-1].split(","))))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lmopt", default="build/tools/lmopt")
    ap.add_argument("--out", default="sweep_out", type=Path)
    ap.add_argument("--variants", nargs="+", default=["polyak", "som-v1", "som-v2"])
    ap.add_argument("--batch", type=int, default=1)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--iters", type=int, default=20000)
    ap.add_argument("--norm", default="l2")
    ap.add_argument("--data", help="libsvm file; synthetic data when omitted")
    ap.add_argument("--skip-verify", action="store_true")
    args = ap.parse_args()

    if not args.skip_verify:
        v = subprocess.run([args.lmopt, "verify"], capture_output=True, text=True)
        if v.returncode != 0:
            sys.stderr.write(v.stdout + v.stderr)
            sys.stderr.write("verify failed; not running the sweep\n")
            return 1

    args.out.mkdir(parents=True, exist_ok=True)
    source = ["--data", args.data] if args.data else ["--synthetic"]
    summary = {}
    for variant in args.variants:
        for eta in ETAS:
            finals = []
            for seed in range(args.seeds):
                path = args.out / f"{variant}_b{args.batch}_eta{eta}_s{seed}.csv"
                cmd = [args.lmopt, "run", *source, "--variant", variant, "--norm", args.norm,
                       "--eta0", eta, "--batch", str(args.batch), "--iters", str(args.iters),
                       "--seed", str(seed), "--out", str(path)]
                r = subprocess.run(cmd, capture_output=True, text=True)
                if r.returncode not in (0, 3):
                    sys.stderr.write(r.stderr)
                    return r.returncode
                finals.append(last_row(path))
            key = f"{variant} eta0={eta}"
            summary[key] = {
                "runmin_loss": statistics.mean(f["runmin_loss"] for f in finals),
                "runmin_grad": statistics.mean(f["runmin_grad"] for f in finals),
            }
            print(f"{key:24s} loss {summary[key]['runmin_loss']:.9g} grad {summary[key]['runmin_grad']:.6g}",
                  flush=True)
        best = min(ETAS, key=lambda e: summary[f"{variant} eta0={e}"]["runmin_loss"])
        print(f"best {variant}: eta0={best}")

    (args.out / "summary.json").write_text(json.dumps(summary, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
