#!/usr/bin/env python3
"""
Reproduce the numerical study: S3M3 and S3M4 families at the default rates.

Writes compare_S3M3.csv, compare_S3M4.csv and the matching SVG plots into
Config.DATA_DIR.
"""

import os
import sys

from app import EXIT_OK, ReliabilityApp
from config import Config

# name -> exact (N_S, N_M) of the family
STUDIES = (("S3M3", 3, 3), ("S3M4", 3, 4))


def main():
    """Run both comparison studies through the CLI"""
    try:
        data_dir = Config.ensure_data_dir()
        app = ReliabilityApp()
        for name, sensors, mcus in STUDIES:
            for fmt in ("csv", "svg"):
                out = os.path.join(data_dir, f"compare_{name}.{fmt}")
                print(f"Writing {out}")
                code = app.run([
                    "compare",
                    "--sensors", str(sensors),
                    "--mcus", str(mcus),
                    "--max-sensors", str(sensors),
                    "--max-mcus", str(mcus),
                    "--format", fmt,
                    "--out", out,
                ])
                if code != EXIT_OK:
                    sys.exit(code)

    except KeyboardInterrupt:
        print("\nStudy interrupted by user")
        sys.exit(1)


if __name__ == "__main__":
    main()
