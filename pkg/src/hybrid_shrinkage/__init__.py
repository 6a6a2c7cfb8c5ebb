"""Sparse vector denoising with soft-thresholding, empirical Bayes and SURE."""

from importlib.metadata import version

__version__ = version("hybrid-shrinkage")
