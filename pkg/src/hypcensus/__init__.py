"""Closed-geodesic censuses and limit-set dimension estimates on genus-2
hyperbolic surfaces."""

__version__ = "0.1.0"
