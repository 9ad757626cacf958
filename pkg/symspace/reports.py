"""
Report writers. CSV goes through pandas with a versioned comment header and
17 significant digits; JSON uses repr floats, with non-finite values spelled
as strings so the output stays valid JSON.
"""

import io
import json
import math
import logging
import sys
from dataclasses import dataclass, field
from typing import Iterable, List, Optional

import numpy as np
import pandas as pd

from . import __version__

logger = logging.getLogger(__name__)

REPORT_HEADER = "# symspace-report v1"
FLOAT_FORMAT = "%.17g"


@dataclass
class VerdictReport:
    """Outcome of one verification run: parameters echoed, per-level rows and a verdict"""

    command: str
    parameters: dict
    rows: List[dict] = field(default_factory=list)
    classification: Optional[str] = None
    holds: Optional[bool] = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"command": self.command, "parameters": self.parameters, "levels": self.rows}
        if self.classification is not None:
            out["classification"] = self.classification
        if self.holds is not None:
            out["holds"] = self.holds
        out.update(self.details)
        return out


def _jsonable(obj):
    if hasattr(obj, "to_dict"):
        return _jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        value = float(obj)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "+inf" if value > 0 else "-inf"
        return value
    return obj


def render_json(payload: dict, command: Optional[str] = None) -> str:
    document = {"report": REPORT_HEADER.lstrip("# "), "version": __version__}
    if command is not None:
        document["command"] = command
    document.update(payload)
    return json.dumps(_jsonable(document), indent=2, sort_keys=True, allow_nan=False) + "\n"


def render_csv(rows: Iterable[dict], columns: Optional[List[str]] = None) -> str:
    frame = pd.DataFrame(list(rows), columns=columns)
    buffer = io.StringIO()
    buffer.write(REPORT_HEADER + "\n")
    frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return buffer.getvalue()


def emit(text: str, path: Optional[str] = None) -> None:
    """Write a rendered report to a file, or to stdout when no path is given"""
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.info(f"✅ Report written to {path}")
