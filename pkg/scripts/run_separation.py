#!/usr/bin/env python3
"""Run the headline bounded-vs-unbounded separation and print the table.

Writes results.csv and transcript.log under out/separation.
"""

import sys

from compgap.cli import main

if __name__ == "__main__":
    rc = main(["separation", "--trials", "2000",
               "--out", "out/separation"] + sys.argv[1:])
    if rc == 0:
        rc = main(["report", "--out", "out/separation"])
    sys.exit(rc)
