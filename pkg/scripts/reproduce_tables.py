#!/usr/bin/env python3
"""Regenerate every table and verification report into build/.

Writes the three markdown tables, the combined JSON report and a second
JSON run used to confirm byte-level determinism.
"""

import io
import sys
from contextlib import redirect_stdout
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from poissonlab.cli import main  # noqa: E402

OUT = Path(__file__).resolve().parent.parent / "build"


def capture(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    if code != 0:
        raise SystemExit(f"command {argv} exited with {code}")
    return buf.getvalue()


def run():
    OUT.mkdir(exist_ok=True)
    (OUT / "ruled.md").write_text(capture(["tables", "ruled", "--m-max", "10", "--md"]))
    (OUT / "hopf.md").write_text(capture(["tables", "hopf", "--md"]))
    (OUT / "products.md").write_text(capture(["tables", "products", "--md"]))
    first = capture(["report", "--m-max", "8"])
    second = capture(["report", "--m-max", "8"])
    if first != second:
        raise SystemExit("consecutive reports differ")
    (OUT / "report.json").write_text(first)
    print(f"wrote {OUT}/ruled.md, hopf.md, products.md, report.json")
    print("determinism check: consecutive reports are byte-identical")


if __name__ == "__main__":
    run()
