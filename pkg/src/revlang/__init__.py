"""revlang: a reversible interpreter toolkit for an imperative language
with blocks, local variables, procedures and interleaving parallelism.

Programs run forwards under an annotated semantics that stamps each
state-changing step with a globally ordered identifier and saves the
overwritten data; inversion produces a program that consumes those
identifiers in descending order and restores the exact initial state.
"""

__version__ = "0.1.0"

from .syntax import parse, render, validate  # noqa: F401
from .transform import annotate, invert, remove_annotation  # noqa: F401
from .engines import (  # noqa: F401
    annotated_configuration, enabled_redexes, plain_configuration,
    reverse_configuration, run_to_completion, step,
)
from .checker import roundtrip  # noqa: F401
