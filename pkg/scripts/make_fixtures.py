#!/usr/bin/env python3
"""Regenerate the synthetic clip suite under a target directory.

Usage: python scripts/make_fixtures.py [outdir]   (default: fixtures/)
"""

import sys
from pathlib import Path

from fallwatch.synthetic import ALL_SCRIPTS, write_fixture_suite


def main() -> int:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("fixtures")
    manifest = write_fixture_suite(outdir)
    print(f"wrote {len(ALL_SCRIPTS)} clips + manifest to {manifest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
