"""Closed-form fundamental solutions and boundary derivatives.

2D Laplace, 2D Kelvin elastostatics, the elastic half-plane (Kelvin plus
an image correction that makes the surface traction-free) and the
Flamant surface point-load solution. Kernels are written in plane-strain
form; plane stress is handled through the effective Poisson ratio
nu/(1+nu), which leaves the shear modulus unchanged.

Index convention: us[a, b] is the b-component of displacement at the
field point x due to a unit point load along e_a at the source point y;
ts[a, b] the matching traction with the unit normal n at x.

The image-part stresses of the half-plane kernel are obtained by exact
forward-mode differentiation (duals) of the printed image displacements,
then strain, Hooke and contraction with the normal.
"""

from dataclasses import dataclass

import numpy as np

from . import duals
from .duals import Dual2

_MIN_R = 1e-14


@dataclass(frozen=True)
class Material:
    """Isotropic elastic constants plus the 2D reduction in force."""

    E: float
    nu: float
    plane_condition: str = "plane_strain"

    def __post_init__(self):
        if self.E <= 0.0:
            raise ValueError(f"Young's modulus must be positive, got {self.E}")
        if not -1.0 < self.nu < 0.5:
            raise ValueError(f"Poisson ratio must lie in (-1, 0.5), got {self.nu}")
        if self.plane_condition not in ("plane_strain", "plane_stress"):
            raise ValueError(f"unknown plane condition {self.plane_condition!r}")

    @property
    def G(self):
        return self.E / (2.0 * (1.0 + self.nu))

    @property
    def nu_eff(self):
        """Poisson ratio as used by plane-strain-form kernels and Hooke."""
        if self.plane_condition == "plane_strain":
            return self.nu
        return self.nu / (1.0 + self.nu)

    @property
    def lam(self):
        nu = self.nu_eff
        return 2.0 * self.G * nu / (1.0 - 2.0 * nu)


@dataclass(frozen=True)
class PotentialKernel:
    us: float
    dusdn: float


@dataclass(frozen=True)
class ElasticKernel:
    us: np.ndarray
    ts: np.ndarray


# ---------------------------------------------------------------------------
# Laplace


def laplace_pair(X, N, y):
    """Vectorized Laplace kernel: us = -ln r / 2pi, dusdn = -(r.n)/(2pi r^2)."""
    r = X - y
    r2 = np.einsum("pd,pd->p", r, r)
    if np.any(r2 < _MIN_R**2):
        raise ValueError("kernel evaluated too close to the source point; "
                         "singular integrals must use the regularized paths")
    us = -0.5 / np.pi * 0.5 * np.log(r2)
    dusdn = -0.5 / np.pi * np.einsum("pd,pd->p", r, N) / r2
    return us, dusdn


def laplace_kernel(x, y, n):
    us, dusdn = laplace_pair(np.asarray(x, float)[None], np.asarray(n, float)[None],
                             np.asarray(y, float))
    return PotentialKernel(us[0], dusdn[0])


LOG_COEFF_POTENTIAL = -0.5 / np.pi


# ---------------------------------------------------------------------------
# Kelvin (full plane)


def kelvin_pair(X, N, y, mat):
    """Vectorized Kelvin displacement and traction kernels, shape (P, 2, 2)."""
    G, nu = mat.G, mat.nu_eff
    r = X - y
    rn = np.linalg.norm(r, axis=1)
    if np.any(rn < _MIN_R):
        raise ValueError("Kelvin kernel evaluated at coincident points")
    rhat = r / rn[:, None]
    drdn = np.einsum("pd,pd->p", rhat, N)
    eye = np.eye(2)
    k1 = 1.0 / (8.0 * np.pi * G * (1.0 - nu))
    outer = rhat[:, :, None] * rhat[:, None, :]
    us = k1 * ((3.0 - 4.0 * nu) * (-np.log(rn))[:, None, None] * eye + outer)
    k2 = -1.0 / (4.0 * np.pi * (1.0 - nu))
    # skew orientation (normal index leading) fixed by the Somigliana
    # reproduction and traction-free-surface identities
    skew = (N[:, :, None] * rhat[:, None, :] - N[:, None, :] * rhat[:, :, None])
    ts = k2 / rn[:, None, None] * (
        drdn[:, None, None] * ((1.0 - 2.0 * nu) * eye + 2.0 * outer)
        + (1.0 - 2.0 * nu) * skew
    )
    return us, ts


def kelvin_kernel(x, y, n, mat):
    us, ts = kelvin_pair(np.asarray(x, float)[None], np.asarray(n, float)[None],
                         np.asarray(y, float), mat)
    return ElasticKernel(us[0], ts[0])


def log_coeff_kelvin(mat):
    """Coefficient of ln(r)*delta in the Kelvin displacement kernel."""
    return -(3.0 - 4.0 * mat.nu_eff) / (8.0 * np.pi * mat.G * (1.0 - mat.nu_eff))


# ---------------------------------------------------------------------------
# Half-plane (material at x1 > 0, free surface x1 = 0)


def _halfplane_image_displacement(x1, x2, y, nu):
    """Image-part displacements as a 2x2 nest of Dual2 over field coords."""
    c = y[0]
    r1 = x1 - y[0]
    r2 = x2 - y[1]
    R1 = x1 + y[0]
    R2 = r2
    R = (R1 * R1 + R2 * R2).sqrt()
    theta = duals.atan2(R2, R1)
    cx = x1 * c
    R2inv = 1.0 / (R * R)
    R4inv = R2inv * R2inv
    k34 = 3.0 - 4.0 * nu
    klog = 8.0 * (1.0 - nu) ** 2 - k34
    kth = 4.0 * (1.0 - nu) * (1.0 - 2.0 * nu)
    u11 = -klog * R.log() + (k34 * R1 * R1 - 2.0 * cx) * R2inv \
        + 4.0 * cx * R1 * R1 * R4inv
    u12 = k34 * r1 * r2 * R2inv + 4.0 * cx * R1 * r2 * R4inv - kth * theta
    u21 = k34 * r1 * r2 * R2inv - 4.0 * cx * R1 * r2 * R4inv + kth * theta
    u22 = -klog * R.log() + (k34 * r2 * r2 + 2.0 * cx) * R2inv \
        - 4.0 * cx * r2 * r2 * R4inv
    return [[u11, u12], [u21, u22]]


def halfplane_pair(X, N, y, mat):
    """Half-plane kernels: Kelvin part plus the image correction.

    The image displacements are differentiated with duals to get the
    image stresses; the total traction kernel vanishes on x1 = 0, which
    is the point of the construction.
    """
    X = np.asarray(X, float)
    y = np.asarray(y, float)
    if np.any(X[:, 0] < -1e-12) or y[0] < -1e-12:
        raise ValueError("half-plane kernel requires x1 >= 0 for both points")
    us_k, ts_k = kelvin_pair(X, N, y, mat)

    G, nu = mat.G, mat.nu_eff
    kd = 1.0 / (8.0 * np.pi * (1.0 - nu) * G)
    x1 = Dual2.variable(X[:, 0], 0)
    x2 = Dual2.variable(X[:, 1], 1)
    u_img = _halfplane_image_displacement(x1, x2, y, nu)

    P = X.shape[0]
    us_img = np.empty((P, 2, 2))
    grad = np.empty((P, 2, 2, 2))  # [p, load a, comp b, deriv d]
    for a in range(2):
        for b in range(2):
            us_img[:, a, b] = kd * u_img[a][b].value
            grad[:, a, b, 0] = kd * u_img[a][b].grad[0]
            grad[:, a, b, 1] = kd * u_img[a][b].grad[1]

    lam = mat.lam
    eps = 0.5 * (grad + np.swapaxes(grad, 2, 3))
    trace = eps[:, :, 0, 0] + eps[:, :, 1, 1]
    sigma = 2.0 * G * eps + lam * trace[:, :, None, None] * np.eye(2)
    ts_img = np.einsum("pabd,pd->pab", sigma, N)
    return us_k + us_img, ts_k + ts_img


def halfplane_kernel(x, y, n, mat):
    us, ts = halfplane_pair(np.asarray(x, float)[None], np.asarray(n, float)[None],
                            np.asarray(y, float), mat)
    return ElasticKernel(us[0], ts[0])


def log_coeff_halfplane_surface(mat):
    """ln(r) coefficient of the total half-plane kernel when the source
    sits on the free surface (the image singularity coalesces with the
    Kelvin one)."""
    nu = mat.nu_eff
    return -(1.0 - nu) / (np.pi * mat.G)


# ---------------------------------------------------------------------------
# Flamant (unit normal point load on the half-plane surface)


def flamant_displacement(x, y, mat):
    """Displacement at field point y due to a unit normal load at surface
    point x; theta is measured from the depth axis at the load point."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    r_vec = y - x
    r = np.linalg.norm(r_vec)
    if r < _MIN_R:
        raise ValueError("Flamant displacement at the load point is singular")
    G, nu = mat.G, mat.nu_eff
    theta = np.arctan2(r_vec[1], r_vec[0])
    cos_t = r_vec[0] / r
    sin_t = r_vec[1] / r
    u1 = -(2.0 * (1.0 - nu) * np.log(r) - cos_t**2) / (2.0 * np.pi * G)
    u2 = -((1.0 - 2.0 * nu) * theta - cos_t * sin_t) / (2.0 * np.pi * G)
    return np.array([u1, u2])


# ---------------------------------------------------------------------------
# Hooke helpers shared by traction extraction and the Somigliana assembly


def stress_from_grad(jac, mat):
    """Cauchy stress from the displacement gradient (..., 2, 2)."""
    jac = np.asarray(jac, float)
    eps = 0.5 * (jac + np.swapaxes(jac, -1, -2))
    trace = np.trace(eps, axis1=-2, axis2=-1)
    return 2.0 * mat.G * eps + mat.lam * trace[..., None, None] * np.eye(2)


def traction_from_grad(jac, n, mat):
    if abs(1.0 - 2.0 * mat.nu_eff) < 1e-12:
        raise ValueError("incompressible limit nu = 0.5 is not supported")
    return np.einsum("...ab,...b->...a", stress_from_grad(jac, mat), n)


def traction_adjoint(tbar, n, mat):
    """Cotangent on the displacement gradient given one on the traction."""
    tbar = np.asarray(tbar, float)
    n = np.asarray(n, float)
    sym = mat.G * (tbar[..., :, None] * n[..., None, :]
                   + n[..., :, None] * tbar[..., None, :])
    tn = np.einsum("...a,...a->...", tbar, n)
    return sym + mat.lam * tn[..., None, None] * np.eye(2)
