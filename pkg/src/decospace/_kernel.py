"""Kernel selection: compiled extension if available, pure Python otherwise.

Set DECOSPACE_PURE=1 to force the pure-Python kernel (used by the test
suite and the benchmark to exercise both implementations).
"""

import os

if os.environ.get("DECOSPACE_PURE"):
    from . import _kernel_py as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as _impl

IMPLEMENTATION = _impl.IMPLEMENTATION
canonical_form = _impl.canonical_form
isomorphisms = _impl.isomorphisms
