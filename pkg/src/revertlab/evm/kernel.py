"""Selects the compiled interpreter loop when it is built, else the Python one.

Set ``REVERTLAB_PURE=1`` to force the Python loop.
"""
from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("REVERTLAB_PURE"):
    _impl = _kernel_py
else:
    try:
        from . import _kernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernel_py

COMPILED = _impl is not _kernel_py
run = _impl.run
jumpdests = _impl.jumpdests
grow_words = _kernel_py.grow_words
expand = _kernel_py.expand
OK, REVERTS, RETURNS, INVALID = _kernel_py.OK, _kernel_py.REVERTS, _kernel_py.RETURNS, _kernel_py.INVALID
E_NONE, E_UNDERFLOW, E_OVERFLOW = _kernel_py.E_NONE, _kernel_py.E_UNDERFLOW, _kernel_py.E_OVERFLOW
E_GAS, E_JUMP, E_OPCODE = _kernel_py.E_GAS, _kernel_py.E_JUMP, _kernel_py.E_OPCODE
