"""Numerical cross-checks for the exact engines."""
