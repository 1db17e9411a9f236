"""Tree-cut decompositions, the alpha-edge-crossing width approximation and list coloring over it."""

__version__ = "0.1.0"
