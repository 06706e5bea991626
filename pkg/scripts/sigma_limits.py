#!/usr/bin/env python3
"""Width-limit study of circle coherent-state overlaps.

Tabulates |<J,phi|J',phi'>| against the two predicted degenerations:
narrow densities decouple integer actions, wide densities decouple
angles.  Output is one JSON array of probe rows.
"""

import argparse
import json
import sys

from anglekit import circlecs


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--small", default="0.2,0.1,0.05", help="narrow widths")
    parser.add_argument("--large", default="10,20,50", help="wide widths")
    parser.add_argument("--threshold", type=float, default=0.05)
    parser.add_argument("--output", default=None)
    args = parser.parse_args(argv)

    rows = []
    rows += circlecs.limit_study(
        [float(x) for x in args.small.split(",") if x], "small", threshold=args.threshold
    )
    rows += circlecs.limit_study(
        [float(x) for x in args.large.split(",") if x], "large", threshold=args.threshold
    )
    text = json.dumps(rows, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    bad = [r for r in rows if not r["within_threshold"]]
    print(f"{len(rows)} probes, {len(bad)} outside threshold", file=sys.stderr)
    return 0 if not bad else 1


if __name__ == "__main__":
    sys.exit(main())
