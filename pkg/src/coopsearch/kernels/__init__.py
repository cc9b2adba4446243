"""Kernel dispatch: compiled extension when available, pure Python otherwise.

``BACKEND`` records which implementation was selected.  Both expose the
same functions and are benchmarked against each other in
``benchmarks/bench_kernels.py``.
"""

from . import _pure

try:  # pragma: no cover - depends on whether the extension was built
    from . import _core as _impl

    BACKEND = "compiled"
except ImportError:  # pragma: no cover
    _impl = _pure
    BACKEND = "pure"

phi_split = _impl.phi_split
golden_dp_tables = _impl.golden_dp_tables
golden_literal_table = _impl.golden_literal_table
adversary_forced_tables = _impl.adversary_forced_tables
roka_min_queries = _impl.roka_min_queries
model1_min_queries = _impl.model1_min_queries
partition_min_queries = _impl.partition_min_queries


def backends() -> dict[str, object]:
    """All importable backends, keyed by name (for tests and benchmarks)."""
    result = {"pure": _pure}
    if BACKEND == "compiled":
        result["compiled"] = _impl
    return result
