"""Figure scripts for cpwalk run outputs; everything works from the CSV/JSON
files alone."""

__version__ = "0.1.0"
