from __future__ import annotations

import json
import pathlib
from typing import Any, Iterable, Mapping, Sequence

import pandas as pd


def ensure_parent(path: pathlib.Path) -> pathlib.Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_json(path: pathlib.Path, obj: Any) -> None:
    ensure_parent(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def read_json(path: pathlib.Path) -> Any:
    with path.open("r", encoding="utf-8") as fh:
        return json.load(fh)


def write_text(path: pathlib.Path, s: str) -> None:
    ensure_parent(path).write_text(s, encoding="utf-8")


def write_rows_csv(
    path: pathlib.Path, rows: Iterable[Mapping[str, Any]], columns: Sequence[str]
) -> None:
    frame = pd.DataFrame(list(rows), columns=list(columns))
    frame.to_csv(ensure_parent(path), index=False)


def read_rows_csv(path: pathlib.Path) -> list[dict[str, Any]]:
    if not path.exists():
        raise FileNotFoundError(f"CSV not found: {path}")
    frame = pd.read_csv(path)
    return frame.to_dict(orient="records")
