"""Cooperative combinatorial search games.

Non-adaptive separating-family constructions with brute-force oracles,
adaptive query games under adversarial scheduling, and golden-ratio
protocols for indistinguishable elements.
"""

__version__ = "0.1.0"
