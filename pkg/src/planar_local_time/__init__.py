"""Local time of the planar simple random walk under logarithmic time scaling."""

__version__ = "0.1.0"
