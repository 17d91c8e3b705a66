"""Optional thread parallelism, capped by the QRLAB_THREADS env var.

All per-index work in the package draws from counter-based substreams,
so threaded and serial evaluation produce identical results; results are
always collected in index order.
"""

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    raw = os.environ.get("QRLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)


def pmap(fn, items):
    items = list(items)
    n = worker_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
