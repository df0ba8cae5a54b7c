"""Run every bound certificate and print one row per bound.

    python scripts/reproduce_bounds.py [--quick] [--json out.json]
"""

import argparse
import json
import time

from hotelling.verify import KINDS, bound_certificate

# (kind, keyword arguments) at the full parameters used by the acceptance suite
FULL = [
    ("universal-1/12", dict(trials=1000, seed=7)),
    ("worst-3-1/6", dict(trials=100, grid=200)),
    ("equipartition-1/(m+1)", dict(trials=100, m=5)),
    ("general-lb-1/(m+3)", dict(m=4, grid=40)),
    ("variant-ub-1/7", dict(trials=100)),
    ("variant-lb-1/7", dict(grid=150)),
]
QUICK = {"trials": 20, "grid": 40}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="small trial counts and grids")
    ap.add_argument("--json", default=None, help="also write the certificates here")
    args = ap.parse_args()
    assert {k for k, _ in FULL} == set(KINDS)

    rows = []
    print(f"{'bound':<24}{'observed':>12}{'threshold':>12}{'margin':>12}  pass   time")
    for kind, kw in FULL:
        if args.quick:
            kw = {**kw, **{k: v for k, v in QUICK.items() if k in kw}}
        t0 = time.perf_counter()
        cert = bound_certificate(kind, **kw)
        dt = time.perf_counter() - t0
        rows.append({**cert.to_dict(), "params": kw, "seconds": dt})
        print(f"{kind:<24}{cert.observed:>12.6f}{cert.threshold:>12.6f}{cert.margin:>12.2e}"
              f"  {'yes' if cert.passed else 'NO ':<5}{dt:6.1f}s")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
