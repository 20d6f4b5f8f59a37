"""Thread-count control.

``WEYLMOD_THREADS`` sets the number of FFT workers and caps the BLAS pool.
All reductions in the library are done with fixed-order numpy sums, so the
numbers produced do not depend on this setting.
"""

import os
from contextlib import contextmanager

from threadpoolctl import threadpool_limits

ENV_VAR = "WEYLMOD_THREADS"


def thread_count():
    raw = os.environ.get(ENV_VAR, "").strip()
    if not raw or raw == "max":
        return os.cpu_count() or 1
    n = int(raw)
    if n < 1:
        raise ValueError(f"{ENV_VAR} must be a positive integer or 'max'")
    return n


@contextmanager
def limited_threads(n=None):
    with threadpool_limits(limits=n or thread_count()):
        yield
