"""equiscope: evidence-driven investigation of contribution disputes in group work."""

__version__ = "0.1.0"
