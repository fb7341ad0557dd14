#!/usr/bin/env python3
"""Prepend cmake/header.txt to every C++ source that lacks it."""
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
DIRS = ["core", "tools", "tests", "benchmarks"]
SUFFIXES = {".hpp", ".cpp", ".h"}


def main() -> int:
    header = (ROOT / "cmake" / "header.txt").read_text()
    first = header.splitlines()[0]
    changed = 0
    for d in DIRS:
        for path in sorted((ROOT / d).rglob("*")):
            if path.suffix not in SUFFIXES or "vendor" in path.parts:
                continue
            text = path.read_text()
            if text.startswith(first):
                continue
            path.write_text(header.rstrip("\n") + "\n\n" + text)
            changed += 1
    print(f"updated {changed} files")
    return 0


if __name__ == "__main__":
    sys.exit(main())
