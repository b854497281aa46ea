"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
kernels. Set ``ANTISYMID_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import contextlib
import os

from . import _kernels_py

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = {"python": _kernels_py}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels


def _initial():
    want = os.environ.get("ANTISYMID_BACKEND", "").strip().lower()
    if want:
        if want not in BACKENDS:
            raise ImportError(f"ANTISYMID_BACKEND={want!r} is not available; have {sorted(BACKENDS)}")
        return BACKENDS[want]
    return _ckernels if _ckernels is not None else _kernels_py


_active = _initial()


def get():
    return _active


def name() -> str:
    return _active.NAME


def available() -> list[str]:
    return sorted(BACKENDS)


def set_backend(which: str) -> None:
    global _active
    _active = BACKENDS[which]


@contextlib.contextmanager
def using(which: str):
    global _active
    prev = _active
    _active = BACKENDS[which]
    try:
        yield
    finally:
        _active = prev
