#!/usr/bin/env python3
"""Fit registry constants on a grid and write the registry file.

Usage: python scripts/calibrate_constants.py [grid.json] [registry.json]
The registry can then be passed to the CLI with --constants.
"""

import json
import sys
from pathlib import Path

from widthlab.calibrate import calibrate

HERE = Path(__file__).parent


def main():
    grid_path = Path(sys.argv[1]) if len(sys.argv) > 1 else HERE / "calibration_grid.json"
    out_path = Path(sys.argv[2]) if len(sys.argv) > 2 else Path("registry.json")
    report = calibrate(json.loads(grid_path.read_text()))
    out_path.write_text(json.dumps(report["registry"], indent=2, sort_keys=True) + "\n")
    for key, entry in sorted(report["registry"].items()):
        print(f"{key:32s} c_low={entry['c_low']:.4g} c_high={entry['c_high']:.4g}  ({entry['calibrated_on']})")
    print(f"{report['points']} points -> {out_path}")


if __name__ == "__main__":
    main()
