"""Registry of equivalence constants (c_low, c_high) per result tag.

Constants stated in closed form are marked ``explicit``; everything
else defaults to 1.0 and is marked ``uncalibrated`` until a calibration file
overrides it. Calibrated values are never treated as certified.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import PreconditionError

EXPLICIT = "explicit"
UNCALIBRATED = "uncalibrated"
CALIBRATED = "calibrated"


@dataclass(frozen=True)
class ConstantPair:
    c_low: float
    c_high: float
    status: str = UNCALIBRATED
    calibrated_on: Optional[str] = None

    def to_json(self) -> dict:
        out = {"c_low": self.c_low, "c_high": self.c_high, "status": self.status}
        if self.calibrated_on is not None:
            out["calibrated_on"] = self.calibrated_on
        return out


_DEFAULTS = {
    "approx_entropy": ConstantPair(0.5, 4.0, EXPLICIT),
    "iso_regime": ConstantPair(1.0, 1.0),
    "gevrey_regime": ConstantPair(1.0, 1.0),
    "gevrey_hs_corollary": ConstantPair(1.0, 1.0),
    "icompl_iso": ConstantPair(1.0, 1.0),
    "entropy_shape": ConstantPair(1.0, 1.0),
}


@dataclass
class BoundConstants:
    """Lookup with optional parameter-specific keys such as ``iso_regime[s=1,p=1]``."""

    overrides: dict = field(default_factory=dict)

    def get(self, tag: str, **params) -> ConstantPair:
        if tag == "iso_regime_pinf":
            s = params["s"]
            return ConstantPair(2.0**-s, 8.0**s, EXPLICIT)
        if params:
            key = f"{tag}[{','.join(f'{k}={_fmt(v)}' for k, v in sorted(params.items()))}]"
            if key in self.overrides:
                return self.overrides[key]
        if tag in self.overrides:
            return self.overrides[tag]
        if tag not in _DEFAULTS:
            raise PreconditionError(f"unknown constant tag {tag!r}")
        return _DEFAULTS[tag]

    @classmethod
    def load(cls, path) -> "BoundConstants":
        raw = json.loads(Path(path).read_text())
        over = {}
        for key, val in raw.items():
            if not isinstance(val, dict) or "c_low" not in val or "c_high" not in val:
                raise PreconditionError(f"calibration entry {key!r} needs c_low and c_high")
            over[key] = ConstantPair(float(val["c_low"]), float(val["c_high"]), CALIBRATED, val.get("calibrated_on"))
        return cls(over)

    def dump(self) -> dict:
        return {k: v.to_json() for k, v in sorted(self.overrides.items())}


def _fmt(v) -> str:
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        if v.is_integer():
            return str(int(v))
    return repr(v)


DEFAULT_CONSTANTS = BoundConstants()
