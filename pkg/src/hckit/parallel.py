"""Ordered parallel map capped by the HCKIT_THREADS environment variable."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def max_threads() -> int:
    try:
        n = int(os.environ.get("HCKIT_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def ordered_map(fn, items):
    """``[fn(x) for x in items]``, possibly on a thread pool; order is preserved."""
    items = list(items)
    n = min(max_threads(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
