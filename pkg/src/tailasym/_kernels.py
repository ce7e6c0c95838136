"""Kernel backend selection.

Prefers the compiled extension, falls back to the numpy implementation when
the extension was not built.  Both expose the same two functions; the rest of
the package imports them from here and never cares which backend is active.
"""

try:
    from . import _speedups as _impl

    HAVE_COMPILED = True
except ImportError:  # pragma: no cover - depends on build environment
    from . import _kernels_py as _impl

    HAVE_COMPILED = False

eta_grid_sums = _impl.eta_grid_sums
weighted_eta_grid_sums = _impl.weighted_eta_grid_sums


def backend_name():
    """Name of the active kernel backend: 'compiled' or 'numpy'."""
    return "compiled" if HAVE_COMPILED else "numpy"
