"""State files (``catsim-state-v1``), reports and CSV tables.

All floats are written with 17 significant digits so that every file
round-trips bit-exactly and reruns produce byte-identical output.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError
from .fock import PureState
from .modes import TwoModePureState, _infer_parity

FORMAT = "catsim-state-v1"


def fmt(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise InvalidArgumentError(f"cannot serialize non-finite value {x}")
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with fixed float formatting (``json`` offers no hook for it)."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        # numeric leaves such as [re, im] stay on one line
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool)
               for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise InvalidArgumentError(f"cannot serialize {type(obj).__name__}")


def _pairs(amps) -> list:
    return [[float(c.real), float(c.imag)] for c in amps]


def state_to_dict(state) -> dict:
    if isinstance(state, PureState):
        return {"format": FORMAT, "modes": 1, "cutoff": state.cutoff,
                "amplitudes": _pairs(state.amplitudes)}
    if isinstance(state, TwoModePureState):
        return {"format": FORMAT, "modes": 2, "cutoff_a": state.cutoff_a,
                "cutoff_b": state.cutoff_b,
                "amplitudes": [_pairs(row) for row in state.amplitudes]}
    raise InvalidArgumentError(f"cannot serialize {type(state).__name__}")


def _complex(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def state_from_dict(data: dict):
    """Inverse of :func:`state_to_dict`; also accepts a report with a ``state`` key."""
    if "format" not in data and isinstance(data.get("state"), dict):
        data = data["state"]
    if data.get("format") != FORMAT:
        raise InvalidArgumentError(f"unsupported state format {data.get('format')!r}")
    if data["modes"] == 1:
        amps = _complex(data["amplitudes"])
        return PureState(int(data["cutoff"]), amps, _infer_parity(amps))
    if data["modes"] == 2:
        return TwoModePureState(int(data["cutoff_a"]), int(data["cutoff_b"]),
                                _complex(data["amplitudes"]))
    raise InvalidArgumentError(f"unsupported mode count {data['modes']}")


def save_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps(obj) + "\n")
    return path


def load_state(path):
    return state_from_dict(json.loads(Path(path).read_text()))


def write_csv(path, header: str, rows) -> Path:
    """Rows of strings and numbers; numbers use :func:`fmt`."""
    path = Path(path)
    lines = [header]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path
