"""Import-time selection of the Monte Carlo kernel implementation.

The compiled extension is preferred when present; the pure-Python fallback is
bit-identical, just slower.  Set ``BAYESBORROW_BACKEND=python`` or
``=compiled`` to force one (an explicit ``compiled`` request fails loudly if
the extension is missing rather than silently degrading).
"""

from __future__ import annotations

import os

from . import _mc_fallback

_ENV_VAR = "BAYESBORROW_BACKEND"


def _select():
    requested = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if requested in ("", "auto"):
        try:
            from . import _mc_kernel
        except ImportError:
            return _mc_fallback
        return _mc_kernel
    if requested == "python":
        return _mc_fallback
    if requested == "compiled":
        from . import _mc_kernel
        return _mc_kernel
    raise ValueError(f"{_ENV_VAR} must be 'compiled', 'python' or 'auto', got {requested!r}")


kernel = _select()


def active_backend() -> str:
    """Name of the kernel backend in use: 'compiled' or 'python'."""
    return kernel.BACKEND_NAME
