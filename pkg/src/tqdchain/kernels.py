"""Hot numeric kernels.

Every kernel exists twice: a numba-compiled loop version (``*_nb``) and a
vectorised numpy version (``*_np``). The public names at the bottom of the
module are bound to one or the other according to ``_accel.USE_NUMBA``.
Both versions stay importable so tests and the benchmark can compare them.
"""

import math

import numpy as np

from ._accel import USE_NUMBA, njit

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
EIG_ZERO = 1e-14
# off-diagonal entries below this fraction of ||A||_F are dropped without rotating;
# dividing by them loses the unit modulus of the rotation phase
NEGLIGIBLE = 1e-18

_LOG2 = math.log(2.0)


# ---------------------------------------------------------------------------
# Cyclic Jacobi for complex Hermitian matrices
# ---------------------------------------------------------------------------


def _rotation_tangent(th):
    # smaller root of t^2 + 2 th t - 1 = 0; th^2 would overflow past 1e154
    if abs(th) > 1e150:
        return 0.5 / th
    sgn = 1.0 if th >= 0.0 else -1.0
    return sgn / (abs(th) + math.sqrt(th * th + 1.0))


_rotation_tangent_nb = njit(cache=True)(_rotation_tangent)


@njit(cache=True)
def _jacobi_nb(h, want_vectors):
    n = h.shape[0]
    a = h.copy()
    v = np.eye(n, dtype=np.complex128)
    scale = 0.0
    for i in range(n):
        for j in range(n):
            scale += a[i, j].real ** 2 + a[i, j].imag ** 2
    fro = math.sqrt(scale)
    scale = max(1.0, fro)
    sweeps = 0
    for sweeps in range(JACOBI_MAX_SWEEPS + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if math.sqrt(off) < JACOBI_TOL * scale or sweeps == JACOBI_MAX_SWEEPS:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = abs(a[p, q])
                if b <= NEGLIGIBLE * fro:
                    a[p, q] = 0j
                    a[q, p] = 0j
                    continue
                ph = complex(a[p, q].real / b, a[p, q].imag / b)
                th = (a[q, q].real - a[p, p].real) / (2.0 * b)
                t = _rotation_tangent_nb(th)
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                upp = c + 0j
                upq = s + 0j
                uqp = -s * ph.conjugate()
                uqq = c * ph.conjugate()
                for k in range(n):
                    ap = a[k, p]
                    aq = a[k, q]
                    a[k, p] = ap * upp + aq * uqp
                    a[k, q] = ap * upq + aq * uqq
                for k in range(n):
                    ap = a[p, k]
                    aq = a[q, k]
                    a[p, k] = upp.conjugate() * ap + uqp.conjugate() * aq
                    a[q, k] = upq.conjugate() * ap + uqq.conjugate() * aq
                a[p, q] = 0j
                a[q, p] = 0j
                if want_vectors:
                    for k in range(n):
                        vp = v[k, p]
                        vq = v[k, q]
                        v[k, p] = vp * upp + vq * uqp
                        v[k, q] = vp * upq + vq * uqq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, sweeps


def _jacobi_np(h, want_vectors=True):
    a = np.array(h, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    fro = float(np.linalg.norm(a))
    scale = max(1.0, fro)
    offmask = ~np.eye(n, dtype=bool)
    sweeps = 0
    for sweeps in range(JACOBI_MAX_SWEEPS + 1):
        off = math.sqrt(float(np.sum(np.abs(a[offmask]) ** 2)))
        if off < JACOBI_TOL * scale or sweeps == JACOBI_MAX_SWEEPS:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = abs(a[p, q])
                if b <= NEGLIGIBLE * fro:
                    a[p, q] = a[q, p] = 0.0
                    continue
                ph = complex(a[p, q].real / b, a[p, q].imag / b)
                th = (a[q, q].real - a[p, p].real) / (2.0 * b)
                t = _rotation_tangent(th)
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                u = np.array([[c, s], [-s * ph.conjugate(), c * ph.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u
                a[idx, :] = u.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                if want_vectors:
                    v[:, idx] = v[:, idx] @ u
    return np.diag(a).real.copy(), v, sweeps


# ---------------------------------------------------------------------------
# Conditional entropy after a projective qubit measurement on party A
# ---------------------------------------------------------------------------


@njit(cache=True)
def _entropy_from_eigs_nb(w):
    s = 0.0
    for x in w:
        if x > EIG_ZERO:
            s -= x * math.log(x)
    return s / _LOG2


@njit(cache=True)
def _weighted_entropy_nb(sig):
    # p * S(sig / p), 0 for outcomes of vanishing probability
    d = sig.shape[0]
    p = 0.0
    for i in range(d):
        p += sig[i, i].real
    if p < EIG_ZERO:
        return 0.0
    if d == 2:
        a = sig[0, 0].real / p
        dd = sig[1, 1].real / p
        off = abs(sig[0, 1]) / p
        disc = math.sqrt((a - dd) ** 2 + 4.0 * off * off)
        w = np.array([0.5 * (a + dd - disc), 0.5 * (a + dd + disc)])
    else:
        w, _, _ = _jacobi_nb(sig / p, False)
    return p * _entropy_from_eigs_nb(w)


@njit(cache=True)
def _cond_entropy_point_nb(rho, d_b, theta, phi):
    k0 = complex(math.cos(0.5 * theta), 0.0)
    k1 = complex(math.cos(phi), math.sin(phi)) * math.sin(0.5 * theta)
    c00 = k0.conjugate() * k0
    c01 = k0.conjugate() * k1
    c10 = k1.conjugate() * k0
    c11 = k1.conjugate() * k1
    sig1 = np.empty((d_b, d_b), dtype=np.complex128)
    sig2 = np.empty((d_b, d_b), dtype=np.complex128)
    for b in range(d_b):
        for bp in range(d_b):
            r00 = rho[b, bp]
            r01 = rho[b, d_b + bp]
            r10 = rho[d_b + b, bp]
            r11 = rho[d_b + b, d_b + bp]
            s1 = c00 * r00 + c01 * r01 + c10 * r10 + c11 * r11
            sig1[b, bp] = s1
            sig2[b, bp] = r00 + r11 - s1
    return _weighted_entropy_nb(sig1) + _weighted_entropy_nb(sig2)


@njit(cache=True)
def _cond_entropy_grid_nb(rho, d_b, thetas, phis):
    out = np.empty((thetas.shape[0], phis.shape[0]))
    for i in range(thetas.shape[0]):
        for j in range(phis.shape[0]):
            out[i, j] = _cond_entropy_point_nb(rho, d_b, thetas[i], phis[j])
    return out


def _weighted_entropy_np(sig):
    p = np.einsum("...ii->...", sig).real
    safe = np.where(p < EIG_ZERO, 1.0, p)
    w = np.linalg.eigvalsh(sig / safe[..., None, None])
    terms = np.where(w > EIG_ZERO, -w * np.log2(np.where(w > EIG_ZERO, w, 1.0)), 0.0)
    return np.where(p < EIG_ZERO, 0.0, p * terms.sum(axis=-1))


def _cond_entropy_grid_np(rho, d_b, thetas, phis):
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    r4 = np.asarray(rho, dtype=np.complex128).reshape(2, d_b, 2, d_b)
    k = np.empty((thetas.size, phis.size, 2), dtype=np.complex128)
    k[..., 0] = np.cos(0.5 * thetas)[:, None]
    k[..., 1] = np.exp(1j * phis)[None, :] * np.sin(0.5 * thetas)[:, None]
    sig1 = np.einsum("...a,abcd,...c->...bd", k.conj(), r4, k)
    rho_b = r4[0, :, 0, :] + r4[1, :, 1, :]
    sig2 = rho_b - sig1
    return _weighted_entropy_np(sig1) + _weighted_entropy_np(sig2)


def _cond_entropy_point_np(rho, d_b, theta, phi):
    return float(_cond_entropy_grid_np(rho, d_b, [theta], [phi])[0, 0])


if USE_NUMBA:
    jacobi = _jacobi_nb
    cond_entropy_grid = _cond_entropy_grid_nb
    cond_entropy_point = _cond_entropy_point_nb
else:
    jacobi = _jacobi_np
    cond_entropy_grid = _cond_entropy_grid_np
    cond_entropy_point = _cond_entropy_point_np
