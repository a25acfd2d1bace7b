"""Figure renderers for mirrorcut CSV artifacts.

Each ``figN`` module is an independent script taking ``--in``/``--out``; it
reads only the documented CSV schema, never computes physics, and never
touches its inputs.
"""

__version__ = "0.1.0"
