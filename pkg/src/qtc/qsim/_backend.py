"""Select the gate-kernel backend at import time.

Preference order: compiled Cython extension, then the pure-NumPy fallback.
Set QTC_BACKEND=numpy or QTC_BACKEND=cython to force one (forcing cython
raises if the extension was not built).
"""

import os

_requested = os.environ.get("QTC_BACKEND", "").strip().lower()

if _requested == "numpy":
    from . import _apply_numpy as _impl

    BACKEND = "numpy"
elif _requested == "cython":
    from . import _apply_cy as _impl  # type: ignore[no-redef]

    BACKEND = "cython"
elif _requested == "":
    try:
        from . import _apply_cy as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from . import _apply_numpy as _impl  # type: ignore[no-redef]

        BACKEND = "numpy"
else:
    raise RuntimeError(f"QTC_BACKEND must be 'cython' or 'numpy', got {_requested!r}")

apply_circuit = _impl.apply_circuit


def backend_name() -> str:
    """Name of the active gate-kernel backend ('cython' or 'numpy')."""
    return BACKEND
