"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy fallback in ``_pykernels``. Setting ``HAUSDORFF_HYPERSPACE_PURE=1``
forces the fallback. Both backends return bit-identical results.
"""

import os
from contextlib import contextmanager

from . import _pykernels

_BACKENDS = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    _BACKENDS["cython"] = _ckernels

if _ckernels is not None and not os.environ.get("HAUSDORFF_HYPERSPACE_PURE"):
    BACKEND = "cython"
else:
    BACKEND = "python"


def available_backends():
    return sorted(_BACKENDS)


def get_backend(name):
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available") from None


def _install(name):
    global BACKEND, nearest, directed, greedy_net
    impl = get_backend(name)
    BACKEND = name
    nearest = impl.nearest
    directed = impl.directed
    greedy_net = impl.greedy_net


@contextmanager
def use_backend(name):
    """Temporarily route every kernel call through backend ``name``."""
    previous = BACKEND
    _install(name)
    try:
        yield get_backend(name)
    finally:
        _install(previous)


_install(BACKEND)
