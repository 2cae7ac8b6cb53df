"""Backend selection for the batched hot kernels.

The compiled extension is used when it was built; otherwise the numpy
fallback is used. ``use_backend`` switches at runtime (benchmarks, parity
tests). Callers always go through the module-level names below.
"""

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_NAMES = ("qmul", "cross7", "dexp_left", "s3s3_chart_tensors", "koszul")

BACKEND = ""


def available_backends():
    return ("compiled", "python") if _compiled is not None else ("python",)


def use_backend(name):
    """Select ``"compiled"`` or ``"python"`` kernels for this process."""
    global BACKEND
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built; run `pip install -e .`")
        mod = _compiled
    elif name == "python":
        mod = _kernels_py
    else:
        raise ValueError(f"unknown backend {name!r}")
    g = globals()
    for fn in _NAMES:
        g[fn] = getattr(mod, fn)
    BACKEND = name


use_backend("compiled" if _compiled is not None else "python")
