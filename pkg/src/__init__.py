"""
Multi-reservoir dynamics
Exact solutions and truncated-space oracles for a bosonic mode and a two-level
system coupled to several thermal reservoirs
"""

__version__ = "1.0.0"
__author__ = "multibath-dynamics contributors"
