import math

import numpy as np

from tqdchain.spinmodel import DensityMatrix


def ket_to_dm(psi, dims):
    psi = np.asarray(psi, dtype=np.complex128)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(np.outer(psi, psi.conj()), dims)


def bell_phi_plus():
    return ket_to_dm([1, 0, 0, 1], (2, 2))


def basis_ket(bits):
    v = np.zeros(2 ** len(bits), dtype=np.complex128)
    v[int(bits, 2)] = 1.0
    return v


def random_unitary(rng, n):
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, n, scale=1.0):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (m + m.conj().T) / 2


def random_density(rng, n, rank=None):
    rank = n if rank is None else rank
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_x_state(rng):
    """Random valid two-qubit X state with rho_22 = rho_33 and complex coherences."""
    a, b, d = rng.random(3)
    total = a + 2 * b + d
    a, b, d = a / total, b / total, d / total
    z = math.sqrt(a * d) * rng.random() * np.exp(2j * math.pi * rng.random())
    w = b * rng.random() * np.exp(2j * math.pi * rng.random())
    rho = np.zeros((4, 4), dtype=np.complex128)
    rho[0, 0], rho[1, 1], rho[2, 2], rho[3, 3] = a, b, b, d
    rho[0, 3], rho[3, 0] = z, np.conj(z)
    rho[1, 2], rho[2, 1] = w, np.conj(w)
    return DensityMatrix(rho, (2, 2))
