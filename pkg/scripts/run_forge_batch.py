#!/usr/bin/env python3
"""Emit a batch of stage-1 and stage-2 CNF bundles with manifests.

DIMACS files land under out/forge-s1 and out/forge-s2, ready for an
external solver pipeline; the mini-solver's verdicts are in results.csv.
"""

import sys
import tempfile
from pathlib import Path

from compgap.cli import main

if __name__ == "__main__":
    extra = sys.argv[1:]
    with tempfile.TemporaryDirectory() as tmp:
        s1 = Path(tmp) / "s1.cfg"
        s1.write_text("forge.stage = s1\nforge.count = 200\n")
        s2 = Path(tmp) / "s2.cfg"
        s2.write_text("forge.stage = s2\nforge.count = 50\nforge.k = 40\n")
        rc = main(["np-forge", "--config", str(s1),
                   "--out", "out/forge-s1"] + extra)
        if rc == 0:
            rc = main(["np-forge", "--config", str(s2),
                       "--out", "out/forge-s2"] + extra)
    sys.exit(rc)
