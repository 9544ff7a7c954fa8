"""Three-qubit Heisenberg rings with a spin or a magnetic impurity.

Basis states are ``|b1 b2 b3>`` with qubit 1 the most significant bit and
``|0>`` the sigma_z = +1 state. Energies are in units of the coupling with
hbar = k_B = 1.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .matcore import as_matrix, eigh, hermiticity_error, kron_all

GROUND_DEGENERACY_TOL = 1e-9
DENSITY_TOL = 1e-10

IDENTITY = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

N_SITES = 3


def site_operator(op, site, n_sites=N_SITES):
    """Embed a single-qubit ``op`` at ``site`` (0-based) of an n-qubit register."""
    mats = [IDENTITY] * n_sites
    mats[site] = op
    return kron_all(*mats)


def heisenberg_bond(m, n, n_sites=N_SITES):
    """sigma_m . sigma_n for sites ``m`` and ``n`` (0-based)."""
    return sum(site_operator(s, m, n_sites) @ site_operator(s, n, n_sites) for s in PAULIS)


@dataclass(frozen=True)
class SpinImpurityParams:
    """Ring with the impurity at site 1 coupled by ``j1`` to both neighbours."""

    j1: float
    j: float
    family: str = field(default="spin", init=False)

    def __post_init__(self):
        _require_finite(j1=self.j1, j=self.j)

    def hamiltonian(self):
        return build_spin_impurity(self)


@dataclass(frozen=True)
class MagneticImpurityParams:
    """Uniform ring of coupling ``j`` with a z field ``b`` acting on site 1."""

    j: float
    b: float
    family: str = field(default="magnetic", init=False)

    def __post_init__(self):
        _require_finite(j=self.j, b=self.b)

    def hamiltonian(self):
        return build_magnetic_impurity(self)


ModelSpec = SpinImpurityParams | MagneticImpurityParams


def _require_finite(**values):
    for name, x in values.items():
        if not math.isfinite(x):
            raise ValueError(f"{name} must be finite, got {x!r}")


def make_model(family, j1=None, j=1.0, b=None):
    if family == "spin":
        return SpinImpurityParams(j1=float(0.0 if j1 is None else j1), j=float(j))
    if family == "magnetic":
        return MagneticImpurityParams(j=float(j), b=float(0.0 if b is None else b))
    raise ValueError(f"unknown model family {family!r}")


def build_spin_impurity(p):
    h = p.j1 * (heisenberg_bond(0, 1) + heisenberg_bond(2, 0)) + p.j * heisenberg_bond(1, 2)
    return as_matrix(h)


def build_magnetic_impurity(p):
    h = p.j * (heisenberg_bond(0, 1) + heisenberg_bond(1, 2) + heisenberg_bond(2, 0))
    h = h + p.b * site_operator(SIGMA_Z, 0)
    return as_matrix(h)


def analytic_spectrum(model):
    """Closed-form eigenvalues of either impurity Hamiltonian, ascending.

    Spin impurity: J - 4 J1 (x2), -3 J (x2), J + 2 J1 (x4).
    Magnetic impurity: 3J +- B, -3J +- B, +-eta_+, +-eta_- with
    eta_pm = sqrt(B^2 + 9 J^2 +- 2 J B).
    """
    if isinstance(model, SpinImpurityParams):
        j1, j = model.j1, model.j
        vals = [j - 4 * j1] * 2 + [-3 * j] * 2 + [j + 2 * j1] * 4
    elif isinstance(model, MagneticImpurityParams):
        j, b = model.j, model.b
        # clamp round-off; B^2 + 9J^2 - 2|JB| >= 0 always
        eta_p = math.sqrt(max(b * b + 9 * j * j + 2 * j * b, 0.0))
        eta_m = math.sqrt(max(b * b + 9 * j * j - 2 * j * b, 0.0))
        vals = [3 * j + b, 3 * j - b, -3 * j + b, -3 * j - b, eta_p, -eta_p, eta_m, -eta_m]
    else:
        raise TypeError(f"not a model: {model!r}")
    return sorted(float(v) for v in vals)


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    dims: tuple = (2, 2, 2)

    def __post_init__(self):
        m = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if int(np.prod(self.dims)) != m.shape[0]:
            raise ValueError(f"dims {self.dims} do not match matrix size {m.shape[0]}")

    @property
    def dim(self):
        return self.matrix.shape[0]

    def violations(self, tol=DENSITY_TOL):
        """List of invariant violations (empty for a valid state)."""
        out = []
        herm = hermiticity_error(self.matrix)
        if herm > tol:
            out.append(f"not Hermitian: {herm:.3e}")
        tr = np.trace(self.matrix)
        if abs(tr - 1) > tol:
            out.append(f"trace {tr:.12g} != 1")
        if herm <= tol:
            lam = eigh(self.matrix, tol=tol).eigenvalues[0]
            if lam < -tol:
                out.append(f"negative eigenvalue {lam:.3e}")
        return out

    def is_valid(self, tol=DENSITY_TOL):
        return not self.violations(tol)


def gibbs_state(h, t):
    """Canonical state exp(-h/t)/Z, or the ground-space mixture at t = 0.

    Energies are shifted by the ground energy before exponentiating, so
    arbitrarily small positive temperatures do not overflow.
    """
    if not t >= 0:
        raise ValueError(f"temperature must be >= 0, got {t!r}")
    w, v = eigh(h)
    shifted = w - w[0]
    if t == 0:
        weights = (shifted <= GROUND_DEGENERACY_TOL).astype(float)
    else:
        weights = np.exp(-shifted / t)
    weights /= weights.sum()
    rho = (v * weights) @ v.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    n = int(round(math.log2(rho.shape[0])))
    dims = (2,) * n if 2**n == rho.shape[0] else (rho.shape[0],)
    return DensityMatrix(rho, dims)


def thermal_state(model, t):
    return gibbs_state(model.hamiltonian(), t)
