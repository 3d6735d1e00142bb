"""Kernel backend selection.

The compiled extension and the pure-Python kernel expose the same classes
with the same draw-for-draw behaviour. Selection happens once at import:

- ELEGANTPRIMES_BACKEND=py forces the pure-Python kernel;
- ELEGANTPRIMES_BACKEND=c requires the compiled one (ImportError if absent);
- unset or "auto" prefers compiled, falling back quietly.
"""

from __future__ import annotations

import os

_choice = os.environ.get("ELEGANTPRIMES_BACKEND", "auto").lower()

if _choice == "py":
    from . import _kernel_py as _impl
elif _choice == "c":
    from . import _kernel as _impl  # type: ignore[attr-defined]
elif _choice == "auto":
    try:
        from . import _kernel as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as _impl
else:
    raise RuntimeError(
        f"ELEGANTPRIMES_BACKEND={_choice!r} not understood; use auto, c, or py"
    )

PathState = _impl.PathState
Rng = _impl.Rng
BACKEND = _impl.BACKEND


def load_backend(name: str):
    """Explicit backend module by name, independent of the ambient choice."""
    if name == "py":
        from . import _kernel_py

        return _kernel_py
    if name == "c":
        from . import _kernel  # type: ignore[attr-defined]

        return _kernel
    raise ValueError(f"unknown backend {name!r}")
