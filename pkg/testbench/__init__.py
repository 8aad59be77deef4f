"""Numerical testbench for variation-norm Fourier multiplier theory."""

__version__ = "0.1.0"
