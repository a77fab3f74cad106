"""Explicit-state model checking for temporal hyperlogics over finite Kripke structures."""

__version__ = "0.1.0"
