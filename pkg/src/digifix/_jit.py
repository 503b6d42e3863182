"""Backend selection for the hot kernels.

``DIGIFIX_BACKEND=numba`` (default when numba imports) runs the compiled
bitset kernels; ``DIGIFIX_BACKEND=numpy`` runs the vectorized numpy
fallback.  The choice is read once, at import time.
"""

import os

_requested = os.environ.get("DIGIFIX_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"DIGIFIX_BACKEND must be 'numba' or 'numpy', not {_requested!r}")

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

BACKEND = "numba" if (_requested == "numba" and HAVE_NUMBA) else "numpy"
