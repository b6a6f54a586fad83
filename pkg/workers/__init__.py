"""Background worker threads."""

from .grid_worker import StaircaseGridWorker

__all__ = ["StaircaseGridWorker"]
