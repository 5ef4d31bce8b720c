"""Backend selection for the hot similarity kernel.

The compiled extension is preferred when importable; the numpy fallback
is always available. Override with TALISMAN_BACKEND=compiled|numpy
(requesting ``compiled`` when the extension is missing raises at import).
"""

import os

from . import fallback

_requested = os.environ.get("TALISMAN_BACKEND", "").strip().lower()

if _requested == "numpy":
    impl = fallback
elif _requested == "compiled":
    from . import _fastsim as impl
elif _requested in ("", "auto"):
    try:
        from . import _fastsim as impl
    except ImportError:
        impl = fallback
else:
    raise ImportError(f"unknown TALISMAN_BACKEND value {_requested!r}")

BACKEND = impl.BACKEND_NAME
query_kernel = impl.query_kernel


def available_backends():
    """Name -> query_kernel callable for every importable backend."""
    found = {"numpy": fallback.query_kernel}
    try:
        from . import _fastsim

        found["compiled"] = _fastsim.query_kernel
    except ImportError:
        pass
    return found
