"""Engine configuration: reference defaults and persisted user preferences."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, Optional

from PyQt5.QtCore import QSettings

_DEFAULTS_PATH = Path(__file__).parent.parent / "ref" / "defaults.json"
_DEFAULTS: Dict[str, Any] = json.loads(_DEFAULTS_PATH.read_text(encoding="utf-8"))

_ORG = "macdonald-yb"
_APP = "macdonald-yb"


def section(name: str) -> Dict[str, Any]:
    """One top-level block of ``ref/defaults.json`` (empty if absent)."""
    return dict(_DEFAULTS.get(name, {}))


def get_saved_cache_dir() -> Optional[str]:
    """Last memo-cache directory saved with ``--remember-cache-dir`` (None if unset)."""
    value = QSettings(_ORG, _APP).value("cache/dir", "")
    return str(value) or None


def save_cache_dir(path: Optional[str]) -> None:
    settings = QSettings(_ORG, _APP)
    if path:
        settings.setValue("cache/dir", path)
    else:
        settings.remove("cache/dir")
