"""
htrivpy.

Exact classification of the line bundles with no cohomology on complete
two-dimensional toric Deligne-Mumford stacks.
"""

__version__ = "0.1.0"
