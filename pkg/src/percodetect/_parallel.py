"""Ordered fan-out of per-run work to a process pool.

Results are always consumed in submission order, so floating-point
reductions built on top never depend on the worker count.
"""

from __future__ import annotations

import multiprocessing
from collections.abc import Iterator, Sequence
from typing import Any, Callable

_PAYLOAD: tuple[Callable, Any] | None = None


def _set_payload(worker: Callable, payload: Any) -> None:
    global _PAYLOAD
    _PAYLOAD = (worker, payload)


def _call(arg: Any) -> Any:
    worker, payload = _PAYLOAD  # type: ignore[misc]
    return worker(payload, arg)


def ordered_map(
    worker: Callable[[Any, Any], Any],
    payload: Any,
    args: Sequence[Any],
    threads: int,
) -> Iterator[Any]:
    """Yield ``worker(payload, arg)`` for each arg, in order.

    ``threads <= 1`` runs inline; otherwise a process pool is used and the
    payload is shipped once per worker. ``worker`` must be a module-level
    function.
    """
    if threads is None or threads <= 1 or len(args) <= 1:
        for arg in args:
            yield worker(payload, arg)
        return
    processes = min(threads, len(args))
    chunksize = max(1, len(args) // (processes * 8))
    with multiprocessing.get_context().Pool(
        processes=processes, initializer=_set_payload, initargs=(worker, payload)
    ) as pool:
        yield from pool.imap(_call, args, chunksize=chunksize)
