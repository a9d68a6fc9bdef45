"""heiscat: exact computations in higher-level Heisenberg diagram categories
and the degenerate cyclotomic Hecke algebras they act on."""

from .weight import Weight

__all__ = ["Weight"]
__version__ = "0.1.0"
