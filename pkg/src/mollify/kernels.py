"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over.  Setting ``MOLLIFY_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _kernels_py as python_backend

compiled_backend = None
if os.environ.get("MOLLIFY_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_backend
    except ImportError:
        compiled_backend = None

active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "compiled" if compiled_backend is not None else "python"

v_excess = active.v_excess
log_v = active.log_v
log_v_many = active.log_v_many
j1_integrand_many = active.j1_integrand_many
j2_integrand_many = active.j2_integrand_many
kloosterman = active.kloosterman
kloosterman_block = active.kloosterman_block

__all__ = [
    "BACKEND", "active", "compiled_backend", "python_backend",
    "v_excess", "log_v", "log_v_many", "j1_integrand_many",
    "j2_integrand_many", "kloosterman", "kloosterman_block",
]
