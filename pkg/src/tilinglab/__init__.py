"""Perfect tilings of hypergraphs via homomorphism digraphs and barrier checks."""

from .core import Digraph, KGraph, Matching, Partition, Tiling
from .errors import InputError, ResourceLimitError

__version__ = "0.1.0"

__all__ = ["Digraph", "KGraph", "Matching", "Partition", "Tiling", "InputError",
           "ResourceLimitError", "__version__"]
