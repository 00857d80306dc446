"""Exact tools for orders, circular orders, and Euler classes of group actions."""

__version__ = "0.1.0"
