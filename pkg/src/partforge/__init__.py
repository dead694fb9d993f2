"""partforge: curation, annotation, and evaluation toolkit for part-labeled 3D assets."""

__version__ = "0.1.0"
