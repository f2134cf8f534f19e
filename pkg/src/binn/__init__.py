"""Boundary-integral neural networks for 2D potential and elastostatic
problems: geometry, regularized singular quadrature, fundamental-solution
kernels, BIE residual training and interior reconstruction, with
independent BEM/adaptive-quadrature verification oracles."""

__version__ = "0.1.0"
