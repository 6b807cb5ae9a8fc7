"""Laboratory for the s-t path TSP: Hoogeveen's algorithm with LP certificates."""

__version__ = "0.1.0"
