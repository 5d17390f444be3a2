"""Extraction and timeline toolkit for Windows Store IM app artifacts."""

__version__ = "0.1.0"
