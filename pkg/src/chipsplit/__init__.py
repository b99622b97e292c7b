"""Chipsplitting games and one-dimensional maximum-likelihood-degree-one models."""

__version__ = "0.1.0"
