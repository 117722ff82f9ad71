"""Gendered meme-inheritance analysis of the SNAP hep-th citation corpus."""

__version__ = "0.1.0"
