"""Boundary-integral residuals for 2D Laplace problems.

The network approximates only the boundary unknowns: the normal flux on
Dirichlet segments, the potential on Neumann segments. At each source
point y (a segment center, free coefficient c = 1/2 on the smooth piece)
the residual of the direct boundary integral equation is

    R(y) = c*u_hat(y) + int_G dusdn(x;y) u_hat(x) dG
                      - int_G   us(x;y) q_hat(x) dG,

with u_hat the prescribed value on Dirichlet pieces and the network value
on Neumann pieces, q_hat the network flux on Dirichlet pieces and the
prescribed flux on Neumann pieces. The homogeneous problem is assumed,
so the domain-integral slot contributes zero. On the source segment the
log-singular single layer goes through the subtraction-addition rule and
the bounded double layer through the plain rule. The interior value uses
the same kernels with coefficient 1 and no singular handling (points keep
a margin from the boundary).

Training evaluates residuals through a precomputed linear system: kernel
coefficient matrices are assembled once, every iteration is then two
mat-vecs plus per-point network values/fluxes; tests check this equals
the from-scratch evaluation.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import network as nw
from .geometry import DIRICHLET, INTERFACE, NEUMANN
from .kernels import LOG_COEFF_POTENTIAL, laplace_pair
from .quadrature import gauss_legendre, log_moment_defect

FREE_COEFF = 0.5
DEFAULT_MARGIN = 0.03


@dataclass(frozen=True)
class SourcePoint:
    location: np.ndarray
    normal: np.ndarray
    seg_index: int
    c: float = FREE_COEFF


class PotentialProblem:
    """Single-region Laplace problem, interior or exterior."""

    def __init__(self, boundary, kind="interior"):
        if kind not in ("interior", "exterior"):
            raise ValueError(f"unknown domain kind {kind!r}")
        for seg in boundary:
            if seg.bc.tag == INTERFACE:
                raise ValueError(
                    "interface segments are invalid for single-region "
                    "potential problems"
                )
        self.boundary = boundary
        self.kind = kind

    def source_points(self):
        return [
            SourcePoint(seg.source[0], seg.source[1], i)
            for i, seg in enumerate(self.boundary)
        ]


def boundary_unknowns(params, x, seg):
    """Network approximation of the unknown on seg at boundary point x:
    the flux dphi/dn on Dirichlet segments, phi itself on Neumann ones."""
    if seg.bc.tag == INTERFACE:
        raise ValueError("interface segments have no single boundary unknown")
    if seg.bc.tag == DIRICHLET:
        _, jac = nw.forward_with_spatial_grad(params, x)
        return float(jac[0] @ seg.normal_at(x))
    return float(nw.forward(params, x)[0])


def _segment_nodes(seg, rule):
    X, J, N = seg.points(rule.nodes)
    return X, N, J * rule.weights


def residual(problem, params, sp, rule=None):
    """From-scratch BIE residual at one source point (reference path)."""
    rule = rule or gauss_legendre(10)
    y = sp.location
    src_seg = problem.boundary.segments[sp.seg_index]

    if src_seg.bc.tag == DIRICHLET:
        r = sp.c * src_seg.bc.value(y)
    else:
        r = sp.c * float(nw.forward(params, y)[0])

    for k, seg in enumerate(problem.boundary):
        X, N, wts = _segment_nodes(seg, rule)
        us, dusdn = laplace_pair(X, N, y)
        Y, G = nw.forward_batch(params, X)
        if seg.bc.tag == DIRICHLET:
            u_hat = np.array([seg.bc.value(x) for x in X])
            q_hat = np.einsum("pd,pd->p", G[:, 0, :], N)
        else:
            u_hat = Y[:, 0]
            q_hat = np.array([seg.bc.value(x) for x in X])
        r += np.sum(wts * dusdn * u_hat)
        r -= np.sum(wts * us * q_hat)
        if k == sp.seg_index:
            # subtraction-addition completion of the log-singular layer
            q0 = boundary_unknowns(params, y, seg) \
                if seg.bc.tag == DIRICHLET else seg.bc.value(y)
            r -= log_moment_defect(seg.half_arc, rule) * LOG_COEFF_POTENTIAL * q0
    return r


def loss(problem, params, rule=None):
    """Mean squared residual over the source points (reference path)."""
    res = [residual(problem, params, sp, rule) for sp in problem.source_points()]
    return float(np.mean(np.square(res)))


class PotentialSystem:
    """Precomputed residual system: R(theta) = C_val v + C_flux g + b.

    v and g are the network values and fluxes at the fixed evaluation
    points (all quadrature nodes plus all source points); the kernel
    matrices and the boundary-data vector b are assembled once.
    """

    def __init__(self, problem, rule=None):
        rule = rule or gauss_legendre(10)
        if not rule.is_even:
            raise ValueError("singular segments need an even quadrature order")
        self.problem = problem
        self.rule = rule
        segs = problem.boundary.segments
        n_seg = len(segs)
        n_nodes = rule.n
        sources = problem.source_points()

        X, NRM = [], []
        for seg in segs:
            Xs, _, Ns = seg.points(rule.nodes)
            X.append(Xs)
            NRM.append(Ns)
        for sp in sources:
            X.append(sp.location[None])
            NRM.append(sp.normal[None])
        self.X = np.vstack(X)
        self.normals = np.vstack(NRM)
        self.n_sources = len(sources)
        src_col = n_seg * n_nodes + np.arange(n_seg)

        P = self.X.shape[0]
        C_val = np.zeros((n_seg, P))
        C_flux = np.zeros((n_seg, P))
        b = np.zeros(n_seg)

        for i, sp in enumerate(sources):
            y = sp.location
            if segs[sp.seg_index].bc.tag == DIRICHLET:
                b[i] += sp.c * segs[sp.seg_index].bc.value(y)
            else:
                C_val[i, src_col[sp.seg_index]] += sp.c
            for k, seg in enumerate(segs):
                cols = slice(k * n_nodes, (k + 1) * n_nodes)
                Xs = self.X[cols]
                Ns = self.normals[cols]
                wts = seg.half_arc * rule.weights
                us, dusdn = laplace_pair(Xs, Ns, y)
                if seg.bc.tag == DIRICHLET:
                    data = np.array([seg.bc.value(x) for x in Xs])
                    b[i] += np.sum(wts * dusdn * data)
                    C_flux[i, cols] -= wts * us
                    if k == sp.seg_index:
                        C_flux[i, src_col[k]] -= (
                            log_moment_defect(seg.half_arc, rule)
                            * LOG_COEFF_POTENTIAL
                        )
                else:
                    data = np.array([seg.bc.value(x) for x in Xs])
                    C_val[i, cols] += wts * dusdn
                    b[i] -= np.sum(wts * us * data)
                    if k == sp.seg_index:
                        b[i] -= (log_moment_defect(seg.half_arc, rule)
                                 * LOG_COEFF_POTENTIAL * seg.bc.value(y))
        self.C_val = C_val
        self.C_flux = C_flux
        self.b = b
        self.n_out = 1

    def _point_channels(self, Y, G):
        v = Y[:, 0]
        g = np.einsum("pd,pd->p", G[:, 0, :], self.normals)
        return v, g

    def residual_vector(self, params):
        Y, G = nw.forward_batch(params, self.X)
        v, g = self._point_channels(Y, G)
        return self.C_val @ v + self.C_flux @ g + self.b

    def loss_value(self, params):
        return float(np.mean(self.residual_vector(params) ** 2))

    def loss_and_grad(self, params):
        Y, G, cache = nw.forward_batch_cached(params, self.X)
        v, g = self._point_channels(Y, G)
        r = self.C_val @ v + self.C_flux @ g + self.b
        lval = float(np.mean(r * r))
        rbar = (2.0 / self.n_sources) * r
        vbar = self.C_val.T @ rbar
        gbar = self.C_flux.T @ rbar
        Ybar = vbar[:, None]
        Gbar = gbar[:, None, None] * self.normals[:, None, :]
        grads = nw.vjp_batch(params, self.X, cache, Ybar, Gbar)
        return lval, grads


class InteriorValue(NamedTuple):
    value: float
    near_boundary: bool


def interior_value(problem, params, y, rule=None, refine=1,
                   margin=DEFAULT_MARGIN):
    """Reconstruct u(y) inside the domain from the trained boundary data.

    All integrals are regular; points closer than the margin to the
    boundary get a warning tag (nearly singular, accuracy degraded).
    refine=k re-splits every segment into k pieces before integrating,
    which sharpens near-boundary values with the parameters frozen.
    """
    rule = rule or gauss_legendre(10)
    y = np.asarray(y, dtype=float)
    near = problem.boundary.distance(y) < margin

    segs = []
    for seg in problem.boundary:
        segs.extend(seg.split(refine) if refine > 1 else [seg])

    total = 0.0
    for seg in segs:
        X, N, wts = _segment_nodes(seg, rule)
        us, dusdn = laplace_pair(X, N, y)
        Y, G = nw.forward_batch(params, X)
        if seg.bc.tag == DIRICHLET:
            u_hat = np.array([seg.bc.value(x) for x in X])
            q_hat = np.einsum("pd,pd->p", G[:, 0, :], N)
        else:
            u_hat = Y[:, 0]
            q_hat = np.array([seg.bc.value(x) for x in X])
        total += np.sum(wts * (us * q_hat - dusdn * u_hat))
    return InteriorValue(float(total), bool(near))
