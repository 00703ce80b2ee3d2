"""Decide the free / virtually nilpotent dichotomy for Out(A_Γ) with certificates."""

__version__ = "0.1.0"
