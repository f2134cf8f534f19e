# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled batched network kernels (hot path of training).

Same contract and cache layout as binn._mlp_numpy; selected at import
when the extension is built. Fuses the dense/tanh/tangent loops that the
numpy fallback spells out as separate array operations.
"""

import numpy as np

from libc.math cimport tanh

NAME = "compiled"


cdef void _dense_tangent_fwd(double[:, ::1] W, double[::1] b,
                             double[:, ::1] Zin, double[:, :, ::1] Tin,
                             double[:, ::1] U, double[:, ::1] DU,
                             double[:, :, ::1] M, double[:, :, ::1] TU) noexcept nogil:
    cdef Py_ssize_t N = Zin.shape[0]
    cdef Py_ssize_t hout = W.shape[0]
    cdef Py_ssize_t hin = W.shape[1]
    cdef Py_ssize_t n, i, j
    cdef double s, m0, m1, u, du
    for n in range(N):
        for i in range(hout):
            s = b[i]
            m0 = 0.0
            m1 = 0.0
            for j in range(hin):
                s += W[i, j] * Zin[n, j]
                m0 += W[i, j] * Tin[n, j, 0]
                m1 += W[i, j] * Tin[n, j, 1]
            u = tanh(s)
            du = 1.0 - u * u
            U[n, i] = u
            DU[n, i] = du
            M[n, i, 0] = m0
            M[n, i, 1] = m1
            TU[n, i, 0] = du * m0
            TU[n, i, 1] = du * m1


cdef void _dense_tangent_bwd(double[:, ::1] W,
                             double[:, ::1] Zin, double[:, :, ::1] Tin,
                             double[:, ::1] U, double[:, ::1] DU,
                             double[:, :, ::1] M,
                             double[:, ::1] Ubar, double[:, :, ::1] TUbar,
                             double[:, ::1] gW, double[::1] gb,
                             double[:, ::1] Zinbar, double[:, :, ::1] Tinbar) noexcept nogil:
    # accumulates into gW, gb, Zinbar, Tinbar
    cdef Py_ssize_t N = Zin.shape[0]
    cdef Py_ssize_t hout = W.shape[0]
    cdef Py_ssize_t hin = W.shape[1]
    cdef Py_ssize_t n, i, j
    cdef double mbar0, mbar1, dubar, pbar, du, u, w
    for n in range(N):
        for i in range(hout):
            du = DU[n, i]
            u = U[n, i]
            mbar0 = du * TUbar[n, i, 0]
            mbar1 = du * TUbar[n, i, 1]
            dubar = TUbar[n, i, 0] * M[n, i, 0] + TUbar[n, i, 1] * M[n, i, 1]
            pbar = du * Ubar[n, i] - 2.0 * u * du * dubar
            gb[i] += pbar
            for j in range(hin):
                gW[i, j] += pbar * Zin[n, j] + mbar0 * Tin[n, j, 0] + mbar1 * Tin[n, j, 1]
                w = W[i, j]
                Zinbar[n, j] += pbar * w
                Tinbar[n, j, 0] += mbar0 * w
                Tinbar[n, j, 1] += mbar1 * w


def eval_batch_cached(weights, X):
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef int n_layers = len(weights)
    cdef int n_blocks = (n_layers - 4) // 4
    cdef double[:, ::1] W0 = weights[0]
    cdef double[::1] b0 = weights[1]
    cdef double[:, ::1] Wf = weights[n_layers - 2]
    cdef double[::1] bf = weights[n_layers - 1]
    cdef Py_ssize_t N = Xv.shape[0]
    cdef Py_ssize_t h = W0.shape[0]
    cdef Py_ssize_t m = Wf.shape[0]
    cdef Py_ssize_t n, i, j
    cdef int blk
    cdef double s, z, dz, acc, g0, g1
    cdef double[:, ::1] Z0v, Zv, Uv, DUv, Vv, DVv, Zout_v, Yv, D0v
    cdef double[:, :, ::1] T0v, Tv, M1v, TU_v, M2v, TVv, Tout_v, Gv

    Z0 = np.empty((N, h))
    D0 = np.empty((N, h))
    T0 = np.empty((N, h, 2))
    Z0v = Z0
    D0v = D0
    T0v = T0
    with nogil:
        for n in range(N):
            for i in range(h):
                s = b0[i] + W0[i, 0] * Xv[n, 0] + W0[i, 1] * Xv[n, 1]
                z = tanh(s)
                dz = 1.0 - z * z
                Z0v[n, i] = z
                D0v[n, i] = dz
                T0v[n, i, 0] = dz * W0[i, 0]
                T0v[n, i, 1] = dz * W0[i, 1]
    cache = [(Z0, D0, T0)]

    Z = Z0
    T = T0
    for blk in range(n_blocks):
        Wa = weights[2 + 4 * blk]
        ba = weights[3 + 4 * blk]
        Wb = weights[4 + 4 * blk]
        bb = weights[5 + 4 * blk]
        U = np.empty((N, h))
        DU = np.empty((N, h))
        M1 = np.empty((N, h, 2))
        TU = np.empty((N, h, 2))
        V = np.empty((N, h))
        DV = np.empty((N, h))
        M2 = np.empty((N, h, 2))
        TV = np.empty((N, h, 2))
        Zout = np.empty((N, h))
        Tout = np.empty((N, h, 2))
        Zv = Z
        Tv = T
        Uv = U
        DUv = DU
        M1v = M1
        TU_v = TU
        Vv = V
        DVv = DV
        M2v = M2
        TVv = TV
        Zout_v = Zout
        Tout_v = Tout
        _dense_tangent_fwd(Wa, ba, Zv, Tv, Uv, DUv, M1v, TU_v)
        _dense_tangent_fwd(Wb, bb, Uv, TU_v, Vv, DVv, M2v, TVv)
        with nogil:
            for n in range(N):
                for i in range(h):
                    Zout_v[n, i] = Zv[n, i] + Vv[n, i]
                    Tout_v[n, i, 0] = Tv[n, i, 0] + TVv[n, i, 0]
                    Tout_v[n, i, 1] = Tv[n, i, 1] + TVv[n, i, 1]
        cache.append((Z, T, U, DU, M1, TU, V, DV, M2))
        Z = Zout
        T = Tout

    Y = np.empty((N, m))
    G = np.empty((N, m, 2))
    Yv = Y
    Gv = G
    Zv = Z
    Tv = T
    with nogil:
        for n in range(N):
            for i in range(m):
                acc = bf[i]
                g0 = 0.0
                g1 = 0.0
                for j in range(h):
                    acc += Wf[i, j] * Zv[n, j]
                    g0 += Wf[i, j] * Tv[n, j, 0]
                    g1 += Wf[i, j] * Tv[n, j, 1]
                Yv[n, i] = acc
                Gv[n, i, 0] = g0
                Gv[n, i, 1] = g1
    cache.append((Z, T))
    return Y, G, cache


def eval_batch(weights, X):
    Y, G, _ = eval_batch_cached(weights, X)
    return Y, G


def vjp_batch(weights, X, cache, Ybar, Gbar):
    cdef double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef double[:, ::1] Ybar_v = np.ascontiguousarray(Ybar, dtype=np.float64)
    cdef double[:, :, ::1] Gbar_v = np.ascontiguousarray(Gbar, dtype=np.float64)
    cdef int n_layers = len(weights)
    cdef int n_blocks = (n_layers - 4) // 4
    cdef double[:, ::1] W0 = weights[0]
    cdef double[:, ::1] Wf = weights[n_layers - 2]
    cdef Py_ssize_t N = Xv.shape[0]
    cdef Py_ssize_t h = W0.shape[0]
    cdef Py_ssize_t m = Wf.shape[0]
    cdef Py_ssize_t n, i, j
    cdef int blk
    cdef double yb, gb0, gb1, d0bar, s0bar, d0
    cdef double[:, ::1] Zfin_v, Zbar_v, Z0v, D0v, gW0, gWf
    cdef double[:, :, ::1] Tfin_v, Tbar_v
    cdef double[::1] gbf, gb0v

    grads = [np.zeros_like(w) for w in weights]

    Zfin, Tfin = cache[n_blocks + 1]
    Zfin_v = Zfin
    Tfin_v = Tfin
    gWf = grads[n_layers - 2]
    gbf = grads[n_layers - 1]
    Zbar = np.zeros((N, h))
    Tbar = np.zeros((N, h, 2))
    Zbar_v = Zbar
    Tbar_v = Tbar
    with nogil:
        for n in range(N):
            for i in range(m):
                yb = Ybar_v[n, i]
                gb0 = Gbar_v[n, i, 0]
                gb1 = Gbar_v[n, i, 1]
                gbf[i] += yb
                for j in range(h):
                    gWf[i, j] += yb * Zfin_v[n, j] + gb0 * Tfin_v[n, j, 0] + gb1 * Tfin_v[n, j, 1]
                    Zbar_v[n, j] += yb * Wf[i, j]
                    Tbar_v[n, j, 0] += gb0 * Wf[i, j]
                    Tbar_v[n, j, 1] += gb1 * Wf[i, j]

    for blk in range(n_blocks - 1, -1, -1):
        Zin, Tin, U, DU, M1, TU, V, DV, M2 = cache[1 + blk]
        # the skip connection passes the block-output cotangents through;
        # the tanh branch adds its own contributions into the same buffers
        Ubar = np.zeros((N, h))
        TUbar = np.zeros((N, h, 2))
        _dense_tangent_bwd(weights[4 + 4 * blk], U, TU, V, DV, M2,
                           Zbar, Tbar, grads[4 + 4 * blk], grads[5 + 4 * blk],
                           Ubar, TUbar)
        _dense_tangent_bwd(weights[2 + 4 * blk], Zin, Tin, U, DU, M1,
                           Ubar, TUbar, grads[2 + 4 * blk], grads[3 + 4 * blk],
                           Zbar, Tbar)

    Z0, D0, T0 = cache[0]
    Z0v = Z0
    D0v = D0
    gW0 = grads[0]
    gb0v = grads[1]
    with nogil:
        for n in range(N):
            for i in range(h):
                d0 = D0v[n, i]
                d0bar = Tbar_v[n, i, 0] * W0[i, 0] + Tbar_v[n, i, 1] * W0[i, 1]
                s0bar = d0 * Zbar_v[n, i] - 2.0 * Z0v[n, i] * d0 * d0bar
                gb0v[i] += s0bar
                gW0[i, 0] += s0bar * Xv[n, 0] + d0 * Tbar_v[n, i, 0]
                gW0[i, 1] += s0bar * Xv[n, 1] + d0 * Tbar_v[n, i, 1]
    return grads
