#!/usr/bin/env python3
"""Run every registered scenario against its oracle and print the comparison.

Usage: python scripts/run_scenarios.py [name ...]
With no arguments runs the full registry (the epigraph instance takes a few
seconds); exits nonzero if any scenario misses its tolerance.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from normsplit.cli import run_scenario
from normsplit.scenarios import build_registry, get_scenario


def main(argv) -> int:
    names = argv or sorted(build_registry())
    failures = []
    for name in names:
        ok, _, lines = run_scenario(get_scenario(name))
        print("\n".join(lines))
        print()
        if not ok:
            failures.append(name)
    if failures:
        print("FAILED:", ", ".join(failures))
        return 1
    print(f"all {len(names)} scenarios within tolerance")
    return 0


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
