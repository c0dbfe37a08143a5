#!/usr/bin/env python3
"""Write the data behind the delta and |U^RS| surfaces as CSV files.

usage: python scripts/density_sweep.py [OUTDIR] [--nmax 10] [--pmax 31]
"""

import argparse
import io
from pathlib import Path

from ffconsensus.cli import main

ap = argparse.ArgumentParser()
ap.add_argument("outdir", nargs="?", default="sweep_out")
ap.add_argument("--nmax", type=int, default=10)
ap.add_argument("--pmax", type=int, default=31)
args = ap.parse_args()

out = Path(args.outdir)
out.mkdir(parents=True, exist_ok=True)
for formula, approx in (("delta", True), ("u_rs", False), ("g_rs", False)):
    buf = io.StringIO()
    argv = ["stats", "--sweep", f"2:{args.nmax}", f"2:{args.pmax}", "--formula", formula]
    if approx:
        argv.append("--approx")
    main(argv, out=buf)
    path = out / f"{formula}.csv"
    path.write_text(buf.getvalue())
    print("wrote", path)
