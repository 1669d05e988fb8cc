"""Backend selection for the exact integer kernels.

The compiled extension ``partmon._core`` is used when it imports; otherwise
the pure-Python implementation in ``partmon._purepy`` is used. Both run the
same pivot sequence, so results are identical; the compiled path falls back
to Python integers for a call whose entries outgrow int64.
"""

from __future__ import annotations

import logging
from contextlib import contextmanager

from . import _purepy

try:
    from . import _core as _native
except ImportError:  # extension not built
    _native = None

log = logging.getLogger(__name__)

OPTIMAL = _purepy.OPTIMAL
UNBOUNDED = _purepy.UNBOUNDED
INFEASIBLE = _purepy.INFEASIBLE

_backend = "native" if _native is not None else "python"


def available_backends() -> list[str]:
    return ["native", "python"] if _native is not None else ["python"]


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in available_backends():
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    _backend = name


@contextmanager
def backend(name: str):
    """Temporarily switch the kernel backend."""
    old = get_backend()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(old)


def lp_solve(table, basis, n_struct: int, m: int):
    if _backend == "native":
        try:
            return _native.lp_solve(table, basis, n_struct, m)
        except OverflowError:
            log.debug("lp_solve: int64 overflow, using Python integers")
    return _purepy.lp_solve([list(row) for row in table], list(basis), n_struct, m)


def rref(table, ncols: int):
    if _backend == "native":
        try:
            return _native.rref(table, ncols)
        except OverflowError:
            log.debug("rref: int64 overflow, using Python integers")
    return _purepy.rref([list(row) for row in table], ncols)
