from __future__ import annotations

import pathlib
import sys

import pytest


def _ensure_root_on_path() -> None:
    root = pathlib.Path(__file__).resolve().parents[1]
    if str(root) not in sys.path:
        sys.path.insert(0, str(root))


_ensure_root_on_path()


@pytest.fixture(autouse=True)
def _shipped_defaults(monkeypatch: pytest.MonkeyPatch) -> None:
    # a developer's PEARLSIM_DEFAULTS must not leak into the suite
    monkeypatch.delenv("PEARLSIM_DEFAULTS", raising=False)
