"""Backend selection for the partition search kernel.

The compiled extension is used when it was built; setting the environment
variable ``KANON_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
import os

from . import _search_py

BACKEND = "python"
best_partition = _search_py.best_partition

if os.environ.get("KANON_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _search  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _search = None
    else:
        BACKEND = "cython"
        best_partition = _search.best_partition
