import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("HEISCHAR_THREADS", "1")))
    except ValueError:
        return 1


def chunked_apply(func, X: np.ndarray, chunk: int = 8192) -> np.ndarray:
    """Apply a row-wise vectorised ``func`` in chunks; output order matches input order."""
    X = np.asarray(X)
    n = len(X)
    threads = thread_count()
    if threads == 1 or n <= chunk:
        return func(X)
    parts = [X[i : i + chunk] for i in range(0, n, chunk)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        out = list(pool.map(func, parts))
    return np.concatenate(out, axis=0)
