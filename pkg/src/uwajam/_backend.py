"""Select the sampling backend at import time.

The compiled extension is preferred; the pure-Python mirror is the fallback
for source checkouts without a build step.  ``UWAJAM_BACKEND=python`` or
``UWAJAM_BACKEND=compiled`` forces the choice (the benchmark and the
backend-equivalence tests rely on this).
"""

import os

from . import _pykernels

_forced = os.environ.get("UWAJAM_BACKEND", "").strip().lower()

if _forced == "python":
    kernels = _pykernels
    BACKEND = "python"
elif _forced == "compiled":
    from . import _kernels as kernels  # ImportError here is deliberate
    BACKEND = "compiled"
else:
    try:
        from . import _kernels as kernels
        BACKEND = "compiled"
    except ImportError:
        kernels = _pykernels
        BACKEND = "python"
