#!/usr/bin/env python3
# Timestamp: 2026-10-19
"""Ordered fan-out of independent work items (grid points, trials, depths)."""

import concurrent.futures as _futures
import logging
import time as _time
from dataclasses import dataclass as _dataclass
from dataclasses import field as _field
from typing import Any as _Any
from typing import Callable as _Callable
from typing import Dict, List, Optional, Sequence

from .config import Config

__all__ = ["run_ordered"]

logger = logging.getLogger(__name__)


@_dataclass
class _Batch:
    """A batch of items with per-item outcome tracking (internal)."""

    items: Sequence[_Any]
    results: List[_Any] = _field(default_factory=list)
    failed: Dict[int, str] = _field(default_factory=dict)  # index -> error
    completed: int = 0
    status: str = "pending"  # pending, running, completed, failed
    started_at: float = _field(default_factory=_time.time)

    def __post_init__(self):
        self.results = [None] * len(self.items)

    @property
    def progress(self) -> float:
        """Progress as percentage (0-100)."""
        if not self.items:
            return 100.0
        return (self.completed + len(self.failed)) / len(self.items) * 100

    def to_dict(self) -> dict:
        return {
            "items": len(self.items),
            "completed": self.completed,
            "failed": self.failed,
            "status": self.status,
            "elapsed_s": _time.time() - self.started_at,
        }


def run_ordered(
    fn: _Callable[[_Any], _Any],
    items: Sequence[_Any],
    workers: Optional[int] = None,
    on_progress: Optional[_Callable[[_Batch], None]] = None,
    strict: bool = True,
) -> List[_Any]:
    """Apply fn to every item on a thread pool, results in item order.

    Args:
        fn: Function of one item
        items: Work items
        workers: Thread count (default: Config.get_threads())
        on_progress: Called with the batch after each finished item
        strict: Re-raise the first item failure; otherwise the failed
            item's slot holds the exception instance

    Returns:
        List of results aligned with items
    """
    items = list(items)
    batch = _Batch(items=items)
    batch.status = "running"
    workers = workers or Config.get_threads()

    def _record(index: int, future: _futures.Future) -> None:
        try:
            batch.results[index] = future.result()
            batch.completed += 1
        except Exception as e:
            batch.failed[index] = str(e)
            batch.results[index] = e
        if on_progress:
            on_progress(batch)

    if workers == 1 or len(items) <= 1:
        for i, item in enumerate(items):
            future: _futures.Future = _futures.Future()
            try:
                future.set_result(fn(item))
            except Exception as e:
                future.set_exception(e)
            _record(i, future)
    else:
        with _futures.ThreadPoolExecutor(max_workers=workers) as executor:
            pending = {executor.submit(fn, item): i for i, item in enumerate(items)}
            for future in _futures.as_completed(pending):
                _record(pending[future], future)

    batch.status = "completed" if not batch.failed else "failed"
    if batch.failed:
        logger.info(f"{len(batch.failed)} of {len(items)} item(s) failed")
        if strict:
            first = min(batch.failed)
            raise batch.results[first]
    return batch.results


# EOF
