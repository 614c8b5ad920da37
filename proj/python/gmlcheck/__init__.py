"""Exhaustiveness and redundancy checking for matches over indexed variants.

The heavy lifting lives in the compiled `_core` module; this package just
re-exports its operations.
"""

from ._core import check_text, clauses_text, oracle

__all__ = ["check_text", "clauses_text", "oracle"]
__version__ = "0.1.0"
