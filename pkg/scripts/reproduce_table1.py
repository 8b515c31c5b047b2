#!/usr/bin/env python3
"""Print the drawdown depth / required recovery table, optionally for custom depths."""

import argparse

from pathlens.recovery import TABLE1_DEPTHS, recovery_table
from pathlens.render import FORMATS, render_recovery_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depths", type=lambda s: tuple(float(x) for x in s.split(",")), default=TABLE1_DEPTHS)
    ap.add_argument("--format", choices=FORMATS, default="markdown")
    args = ap.parse_args()
    print(render_recovery_table(recovery_table(args.depths), args.format), end="")


if __name__ == "__main__":
    main()
