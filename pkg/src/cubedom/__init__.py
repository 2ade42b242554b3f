"""Dominating sets of hypercubes: constructions, exhaustive verification and a bounds ledger."""

from .words import Word
from .coverage import VertexSet, check_domination

__version__ = "0.1.0"
__all__ = ["Word", "VertexSet", "check_domination", "__version__"]
