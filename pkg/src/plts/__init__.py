"""Realizability checking and synthesis for prompt and parametric LTL."""

__version__ = "0.1.0"
