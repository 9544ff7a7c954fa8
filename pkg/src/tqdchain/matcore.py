"""Small dense complex matrices: Kronecker products and Hermitian eigensystems.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; dimensions of
interest here never exceed 8.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels

HERMITIAN_TOL = 1e-12


class NotHermitian(ValueError):
    """Raised when a matrix handed to a Hermitian routine is not Hermitian."""


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def __iter__(self):
        return iter((self.eigenvalues, self.eigenvectors))


def as_matrix(a):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


def hermiticity_error(a):
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def check_hermitian(a, tol=HERMITIAN_TOL):
    err = hermiticity_error(a)
    if err > tol:
        raise NotHermitian(f"max |A - A^H| = {err:.3e} exceeds {tol:.1e}")


def kron(a, b):
    """Kronecker product with qubit ``a`` as the more significant index."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*mats):
    out = np.ones((1, 1), dtype=np.complex128)
    for m in mats:
        out = kron(out, m)
    return out


def _fix_phases(v):
    # make the largest-magnitude entry of each column real and positive;
    # ties go to the lowest index
    mag = np.abs(v)
    for col in range(v.shape[1]):
        m = mag[:, col]
        idx = int(np.flatnonzero(m >= m.max() - 1e-12)[0])
        z = v[idx, col]
        v[:, col] *= np.conj(z) / abs(z)
    return v


def eigh(h, tol=HERMITIAN_TOL):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    h : array_like
        Square Hermitian matrix.
    tol : float
        Allowed ``max |h - h^H|`` before ``NotHermitian`` is raised.

    Returns
    -------
    EigenDecomposition
        Ascending eigenvalues and orthonormal eigenvector columns, each
        column phase-fixed so its largest component is real positive.
    """
    h = as_matrix(h)
    check_hermitian(h, tol)
    h = 0.5 * (h + h.conj().T)
    w, v, sweeps = kernels.jacobi(h, True)
    order = np.argsort(w, kind="stable")
    w = np.asarray(w)[order]
    v = _fix_phases(np.array(v)[:, order])
    return EigenDecomposition(w, v, int(sweeps))


def eigvalsh(h, tol=HERMITIAN_TOL):
    h = as_matrix(h)
    check_hermitian(h, tol)
    h = 0.5 * (h + h.conj().T)
    w, _, _ = kernels.jacobi(h, False)
    return np.sort(np.asarray(w))


def matfunc_hermitian(h, f):
    """Return ``V diag(f(w)) V^H`` for the eigensystem ``(w, V)`` of ``h``.

    ``f`` is applied to the whole eigenvalue array, so numpy ufuncs and
    arithmetic lambdas both work.
    """
    w, v = eigh(h)
    fw = np.asarray(f(w), dtype=float)
    out = (v * fw) @ v.conj().T
    return 0.5 * (out + out.conj().T)
