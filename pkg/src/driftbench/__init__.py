"""Synthetic covariate-shift benchmark.

Classifiers are trained on a standard normal input density and scored on
affinely drifted Gaussian test densities that share the same labelling rule.
"""
__version__ = "0.1.0"
