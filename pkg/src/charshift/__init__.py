"""Simulated quantum algorithms for hidden shift problems over finite fields and rings."""

__version__ = "0.1.0"
