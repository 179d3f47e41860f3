"""Kernel selector: the compiled extension when built, else pure Python."""
try:
    from ._kernels import eluder_longest, residual_sums, seq_search

    BACKEND = "cython"
except ImportError:  # pragma: no cover - exercised only without a build
    from ._kernels_py import eluder_longest, residual_sums, seq_search

    BACKEND = "python"

__all__ = ["BACKEND", "eluder_longest", "residual_sums", "seq_search"]
