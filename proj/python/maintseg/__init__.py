"""Change-point detection benchmark for maintenance event logs."""

from pkgutil import extend_path

__path__ = extend_path(__path__, __name__)

from ._maintseg import (  # noqa: E402
    GridSpecError,
    IncompleteGridError,
    LifeCycle,
    __version__,
    binseg,
    bottomup,
    classify,
    corpus_fingerprint,
    detect,
    e_score,
    fluss_cac,
    kcpd,
    matrix_profile,
    normalize_config,
    pelt,
    read_cycles,
    summarize,
    sweep,
    synthesize,
    write_cycles,
)

__all__ = [
    "GridSpecError",
    "IncompleteGridError",
    "LifeCycle",
    "__version__",
    "binseg",
    "bottomup",
    "classify",
    "corpus_fingerprint",
    "detect",
    "e_score",
    "fluss_cac",
    "kcpd",
    "matrix_profile",
    "normalize_config",
    "pelt",
    "read_cycles",
    "summarize",
    "sweep",
    "synthesize",
    "write_cycles",
]
