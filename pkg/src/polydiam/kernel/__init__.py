"""Solver kernel selection: compiled extension if available, else the
pure-Python twin.  Set POLYDIAM_PURE=1 to force the pure kernel."""

import os

if os.environ.get("POLYDIAM_PURE"):
    from polydiam.kernel.pykernel import CdclSolver, IMPL, to_dimacs, to_internal
else:
    try:
        from polydiam.kernel._ckernel import CdclSolver, IMPL  # type: ignore[attr-defined]
        from polydiam.kernel.pykernel import to_dimacs, to_internal
    except ImportError:
        from polydiam.kernel.pykernel import CdclSolver, IMPL, to_dimacs, to_internal

__all__ = ["CdclSolver", "IMPL", "to_dimacs", "to_internal"]
