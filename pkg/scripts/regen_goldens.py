#!/usr/bin/env python3
"""Refresh the golden snapshots under tests/golden (maintenance only).

Run this after an intentional output change and review the diff; the
test suite byte-compares against these files.
"""

import io
import sys
from contextlib import redirect_stdout
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from poissonlab.cli import main  # noqa: E402

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def capture(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    if code != 0:
        raise SystemExit(f"command {argv} exited with {code}")
    return buf.getvalue()


if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    (GOLDEN / "ruled.md").write_text(capture(["tables", "ruled", "--m-max", "10", "--md"]))
    (GOLDEN / "hopf.md").write_text(capture(["tables", "hopf", "--md"]))
    (GOLDEN / "products.md").write_text(capture(["tables", "products", "--md"]))
    (GOLDEN / "report.json").write_text(capture(["report", "--m-max", "8"]))
    print(f"refreshed snapshots in {GOLDEN}")
