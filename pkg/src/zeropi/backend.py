"""Compute-backend selection: compiled extension with numpy fallback.

The compiled module ``zeropi._fastkern`` is used when importable; otherwise
the numpy implementation ``zeropi._purekern`` takes over.  Setting the
environment variable ``ZEROPI_BACKEND=python`` forces the fallback (useful
for benchmarking and cross-checking the two implementations).
"""

from __future__ import annotations

import os

from . import _purekern

__all__ = ["impl", "BACKEND", "available_backends", "get_backend"]

_backends = {"python": _purekern}
try:
    from . import _fastkern

    _backends["cython"] = _fastkern
except ImportError:  # pragma: no cover - build-environment dependent
    _fastkern = None

_forced = os.environ.get("ZEROPI_BACKEND", "").strip().lower()
if _forced:
    if _forced not in _backends:
        raise ImportError(
            f"ZEROPI_BACKEND={_forced!r} requested but not available "
            f"(have: {sorted(_backends)})")
    impl = _backends[_forced]
else:
    impl = _backends.get("cython", _purekern)

BACKEND: str = impl.BACKEND_NAME

KERNEL_K1 = _purekern.KERNEL_K1
KERNEL_RETRIEVAL = _purekern.KERNEL_RETRIEVAL


def available_backends() -> list[str]:
    return sorted(_backends)


def get_backend(name: str):
    """Return a specific backend module by name ('python' or 'cython')."""
    try:
        return _backends[name]
    except KeyError:
        raise ImportError(f"backend {name!r} not available "
                          f"(have: {sorted(_backends)})") from None
