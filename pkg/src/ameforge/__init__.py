"""Construction and verification of AME states and their combinatorial twins."""

__version__ = "0.1.0"
