"""Pure-numpy batched network kernels (fallback backend).

Same contract as the compiled core: batched forward pass with spatial
tangents, and the parameter VJP given cotangents on both the outputs and
the spatial Jacobians. Weight layout: [W0, b0] + [Wa, ba, Wb, bb] per
residual block + [Wf, bf], every W stored (out, in).
"""

import numpy as np

NAME = "python"


def eval_batch_cached(weights, X):
    W0, b0 = weights[0], weights[1]
    Wf, bf = weights[-2], weights[-1]
    n_blocks = (len(weights) - 4) // 4

    S0 = X @ W0.T + b0
    Z = np.tanh(S0)
    D0 = 1.0 - Z * Z
    T = D0[:, :, None] * W0[None, :, :]
    cache = [(Z, D0, T)]

    for b in range(n_blocks):
        Wa, ba, Wb, bb = weights[2 + 4 * b: 6 + 4 * b]
        U = np.tanh(Z @ Wa.T + ba)
        DU = 1.0 - U * U
        M1 = np.einsum("ij,njd->nid", Wa, T)
        TU = DU[:, :, None] * M1
        V = np.tanh(U @ Wb.T + bb)
        DV = 1.0 - V * V
        M2 = np.einsum("ij,njd->nid", Wb, TU)
        TV = DV[:, :, None] * M2
        Zin, Tin = Z, T
        Z = Z + V
        T = T + TV
        cache.append((Zin, Tin, U, DU, M1, TU, V, DV, M2))

    Y = Z @ Wf.T + bf
    G = np.einsum("ah,nhd->nad", Wf, T)
    cache.append((Z, T))
    return Y, G, cache


def eval_batch(weights, X):
    Y, G, _ = eval_batch_cached(weights, X)
    return Y, G


def vjp_batch(weights, X, cache, Ybar, Gbar):
    """Gradients of sum(Ybar * Y) + sum(Gbar * G) over all weights."""
    W0 = weights[0]
    Wf = weights[-2]
    n_blocks = (len(weights) - 4) // 4
    grads = [None] * len(weights)

    Zfin, Tfin = cache[-1]
    grads[-2] = Ybar.T @ Zfin + np.einsum("nad,nhd->ah", Gbar, Tfin)
    grads[-1] = Ybar.sum(axis=0)
    Zbar = Ybar @ Wf
    Tbar = np.einsum("nad,ah->nhd", Gbar, Wf)

    for b in range(n_blocks - 1, -1, -1):
        Wa, _, Wb, _ = weights[2 + 4 * b: 6 + 4 * b]
        Zin, Tin, U, DU, M1, TU, V, DV, M2 = cache[1 + b]
        M2bar = DV[:, :, None] * Tbar
        DVbar = np.sum(Tbar * M2, axis=2)
        Qbar = DV * Zbar - 2.0 * V * DV * DVbar
        grads[4 + 4 * b] = Qbar.T @ U + np.einsum("nid,njd->ij", M2bar, TU)
        grads[5 + 4 * b] = Qbar.sum(axis=0)
        Ubar = Qbar @ Wb
        TUbar = np.einsum("nid,ij->njd", M2bar, Wb)
        M1bar = DU[:, :, None] * TUbar
        DUbar = np.sum(TUbar * M1, axis=2)
        Pbar = DU * Ubar - 2.0 * U * DU * DUbar
        grads[2 + 4 * b] = Pbar.T @ Zin + np.einsum("nid,njd->ij", M1bar, Tin)
        grads[3 + 4 * b] = Pbar.sum(axis=0)
        Zbar = Zbar + Pbar @ Wa
        Tbar = Tbar + np.einsum("nid,ij->njd", M1bar, Wa)

    Z0, D0, _ = cache[0]
    D0bar = np.sum(Tbar * W0[None, :, :], axis=2)
    S0bar = D0 * Zbar - 2.0 * Z0 * D0 * D0bar
    grads[0] = S0bar.T @ X + np.sum(D0[:, :, None] * Tbar, axis=0)
    grads[1] = S0bar.sum(axis=0)
    return grads
