"""Deterministic contour-perception and symbolic-inference engine."""
