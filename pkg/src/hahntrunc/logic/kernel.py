"""Selects the enumeration kernel at import: compiled if built, else pure Python.

Set ``HAHNTRUNC_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernel_py

python_kernel = _kernel_py

try:
    if os.environ.get("HAHNTRUNC_PURE_PYTHON"):
        raise ImportError("pure-Python kernel forced by environment")
    from . import _kernel as compiled_kernel
except ImportError:
    compiled_kernel = None

if compiled_kernel is not None:
    eval_program = compiled_kernel.eval_program
    MAX_BOUND = compiled_kernel.MAX_BOUND
    BACKEND = "cython"
else:
    eval_program = _kernel_py.eval_program
    MAX_BOUND = None
    BACKEND = "python"


def available_backends():
    """Mapping of backend name to kernel module, compiled first when present."""
    found = {}
    if compiled_kernel is not None:
        found["cython"] = compiled_kernel
    found["python"] = _kernel_py
    return found


def pick(bound, backend=None):
    """Kernel module for ``bound``; falls back to Python above the compiled limit."""
    kernels = available_backends()
    if backend is not None:
        try:
            k = kernels[backend]
        except KeyError:
            raise ValueError(f"kernel backend {backend!r} is not available") from None
        return k
    for k in kernels.values():
        if k.MAX_BOUND is None or bound <= k.MAX_BOUND:
            return k
    return _kernel_py
