"""Order-fixed fan-out of path batches over worker threads."""

from concurrent.futures import ThreadPoolExecutor

# chunking never depends on the thread count, so results are bit-identical
PATH_CHUNK = 256


def chunks(n, size=PATH_CHUNK):
    return [range(i, min(i + size, n)) for i in range(0, n, size)]


def map_ordered(fn, items, threads=1):
    """``[fn(item) for item in items]``, optionally on a thread pool."""
    items = list(items)
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=int(threads)) as pool:
        return list(pool.map(fn, items))
