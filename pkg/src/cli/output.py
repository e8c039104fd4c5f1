from __future__ import annotations

import enum
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Union

import numpy as np
import pandas as pd

FLOAT_FORMAT = "%.12g"


def output_path(out_dir: Path, command: str, name: str, suffix: str) -> Path:
    return Path(out_dir) / f"{command}_{name}{suffix}"


def write_atomic(path: Union[str, Path], text: str) -> Path:
    """Write through a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="\n") as tmp_file:
            tmp_file.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise
    return path


def write_frame(path: Union[str, Path], frame: pd.DataFrame) -> Path:
    return write_atomic(path, frame.to_csv(index=False, float_format=FLOAT_FORMAT))


def _plain(value: Any) -> Any:
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(item) for item in value]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (np.integer, int)) and not isinstance(value, bool):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if not math.isfinite(value):
            return str(value)
        return float(FLOAT_FORMAT % value)
    return value


def write_json(path: Union[str, Path], payload: Any) -> Path:
    text = json.dumps(_plain(payload), indent=2, sort_keys=True)
    return write_atomic(path, text + "\n")
