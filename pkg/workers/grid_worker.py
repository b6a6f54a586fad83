"""Worker thread for staircase grid verification."""

from __future__ import annotations

from typing import Any, Dict, List, Optional, TypedDict

from PyQt5.QtCore import QThread, pyqtSignal

from services.errors import MacdonaldError
from services.staircase import grid_cells, verify_grid


class GridPayload(TypedDict, total=False):
    ok: bool
    message: str
    reports: List[Dict[str, Any]]
    failed: List[List[int]]
    stopped: bool


class StaircaseGridWorker(QThread):
    """Runs verify_unreachable_pole over a (k, a, n) grid off the calling thread."""

    finished = pyqtSignal(str, dict)
    progress = pyqtSignal(str)  # emits the cell being verified

    def __init__(self, action: str = "verify_grid", payload: Optional[Dict[str, Any]] = None):
        super().__init__()
        self.action = action
        self.payload = payload or {}
        self._stop_requested = False

    def stop(self) -> None:
        self._stop_requested = True

    def run(self) -> None:
        if self.action == "verify_grid":
            self._handle_verify_grid()
            return

        if self.action == "list_cells":
            self._handle_list_cells()
            return

        self.finished.emit(self.action, {"ok": False, "message": f"Unknown action '{self.action}'."})

    def _cells(self) -> List[tuple]:
        cells = self.payload.get("cells")
        if cells:
            return [tuple(int(x) for x in cell) for cell in cells]
        return grid_cells(
            self.payload.get("max_nk"),
            self.payload.get("max_a"),
            self.payload.get("min_n"),
            self.payload.get("max_size"),
        )

    def _handle_list_cells(self) -> None:
        try:
            cells = self._cells()
        except (MacdonaldError, TypeError, ValueError) as exc:
            self.finished.emit(self.action, {"ok": False, "message": str(exc)})
            return
        self.finished.emit(self.action, {"ok": True, "message": f"{len(cells)} cell(s).", "cells": [list(c) for c in cells]})

    def _handle_verify_grid(self) -> None:
        try:
            cells = self._cells()
            reports = verify_grid(
                cells,
                self.progress.emit,
                lambda: self._stop_requested,
                self.payload.get("check_segments"),
            )
        except Exception as exc:
            self.finished.emit(self.action, {"ok": False, "message": f"Grid verification failed: {exc}"})
            return

        failed = [[r["k"], r["a"], r["n"]] for r in reports if not (r.get("absent") and r.get("consistent"))]
        payload: GridPayload = {
            "ok": not failed,
            "message": f"Verified {len(reports)} of {len(cells)} cell(s); {len(failed)} failed.",
            "reports": reports,
            "failed": failed,
            "stopped": self._stop_requested,
        }
        self.finished.emit(self.action, payload)
