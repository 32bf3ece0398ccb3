"""Regenerate the committed expected outputs for the golden invocations.

Run from anywhere; paths resolve relative to the repository layout. Each
invocation's stdout bytes become golden/expected/<name>. The generated
lr.gen.json output is also written to golden/lr.json because later
invocations read it as an input.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

GOLDEN = Path(__file__).resolve().parent.parent / "golden"


def main() -> int:
    env = dict(os.environ)
    env.pop("STREAMWEAVE_SEED", None)
    invocations = json.loads((GOLDEN / "invocations.json").read_text())
    expected = GOLDEN / "expected"
    expected.mkdir(exist_ok=True)
    for inv in invocations:
        proc = subprocess.run(
            [sys.executable, "-m", "streamweave", *inv["args"]],
            capture_output=True,
            cwd=GOLDEN,
            env=env,
        )
        if proc.returncode != 0:
            sys.stderr.write(proc.stderr.decode())
            return proc.returncode
        (expected / inv["name"]).write_bytes(proc.stdout)
        if inv["name"] == "lr.gen.json":
            (GOLDEN / "lr.json").write_bytes(proc.stdout)
        print(f"wrote expected/{inv['name']} ({len(proc.stdout)} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
