"""Numerical checks of smoothness and cocoercivity conditions for convex functions."""
