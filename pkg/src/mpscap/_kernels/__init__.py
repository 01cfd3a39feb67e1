"""Tree-walk kernels for the diagonal distribution of an MPS.

Two interchangeable implementations exist:

* ``_tree_cy`` -- Cython depth-first walk, O(n) memory, built at install
  time when a C compiler is available;
* ``_tree_py`` -- numpy breadth-first walk, memory proportional to the live
  prefix set, used whenever the extension is missing.

Both expose ``distribution`` and ``entropy_profile`` with identical
signatures and identical (lexicographically ordered) output.  The choice is
made once at import; set ``MPSCAP_KERNEL=python`` or ``MPSCAP_KERNEL=compiled``
to force one side (the latter raises if the extension was not built).
"""

from __future__ import annotations

import os

_requested = os.environ.get("MPSCAP_KERNEL", "auto").strip().lower()

if _requested in ("", "auto"):
    try:
        from . import _tree_cy as _impl

        ACTIVE_KERNEL = "compiled"
    except ImportError:
        from . import _tree_py as _impl

        ACTIVE_KERNEL = "python"
elif _requested in ("compiled", "cython", "cy"):
    from . import _tree_cy as _impl

    ACTIVE_KERNEL = "compiled"
elif _requested in ("python", "py"):
    from . import _tree_py as _impl

    ACTIVE_KERNEL = "python"
else:
    raise ValueError(
        f"MPSCAP_KERNEL={_requested!r} not understood; "
        "use 'auto', 'compiled' or 'python'"
    )

distribution = _impl.distribution
entropy_profile = _impl.entropy_profile


def active_kernel() -> str:
    """Name of the kernel selected at import ('compiled' or 'python')."""
    return ACTIVE_KERNEL
