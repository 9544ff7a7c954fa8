"""Entropic quantum discord of qubit-measured bipartitions.

All entropies are in bits. Party A is always a single qubit and is the
party that gets measured; B is one qubit or the remaining pair.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .matcore import eigvalsh
from .spinmodel import DensityMatrix

GRID_THETA = 64
GRID_PHI = 64
REFINE_MAX_STEPS = 200
REFINE_TOL = 1e-12
REFINE_STARTS = 4
GOLDEN_XTOL = 1e-10
XSTATE_TOL = 1e-12
XSTATE_DIAG_TOL = 1e-10
CLIP_NEGATIVE = 1e-10


class InvalidSubsystem(ValueError):
    pass


class NotXState(ValueError):
    pass


class ConditionViolated(ValueError):
    pass


class Bipartition(str, Enum):
    PAIR_12 = "pair_12"
    PAIR_23 = "pair_23"
    PAIR_13 = "pair_13"
    ONE_VS_REST_1_23 = "one_vs_rest_1_23"

    @property
    def measured(self):
        return _PARTIES[self][0]

    @property
    def unmeasured(self):
        return _PARTIES[self][1]


# (measured qubit, unmeasured qubits), 0-based
_PARTIES = {
    Bipartition.PAIR_12: (0, (1,)),
    Bipartition.PAIR_23: (1, (2,)),
    Bipartition.PAIR_13: (0, (2,)),
    Bipartition.ONE_VS_REST_1_23: (0, (1, 2)),
}


@dataclass(frozen=True)
class MeasurementAngles:
    theta: float
    phi: float

    def ket(self):
        return np.array(
            [math.cos(self.theta / 2), np.exp(1j * self.phi) * math.sin(self.theta / 2)]
        )


@dataclass(frozen=True)
class DiscordResult:
    discord: float
    classical_correlation: float
    mutual_information: float
    minimizer: MeasurementAngles
    method: str


def _as_density(rho):
    if isinstance(rho, DensityMatrix):
        return rho
    m = np.asarray(rho, dtype=np.complex128)
    n = int(round(math.log2(m.shape[0])))
    dims = (2,) * n if 2**n == m.shape[0] else (m.shape[0],)
    return DensityMatrix(m, dims)


def partial_trace(rho, keep):
    """Reduced state on the subsystems in ``keep``, listed in original order."""
    rho = _as_density(rho)
    n = len(rho.dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise InvalidSubsystem(f"cannot keep {keep} of {n} subsystems")
    t = rho.matrix.reshape(rho.dims + rho.dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for i in range(n):
        if i not in keep:
            col[i] = row[i]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    dims = tuple(rho.dims[i] for i in keep)
    d = int(np.prod(dims))
    return DensityMatrix(reduced.reshape(d, d), dims)


def _entropy_of_eigs(w):
    w = np.where((w < 0) & (w >= -CLIP_NEGATIVE), 0.0, w)
    w = w[w > kernels.EIG_ZERO]
    return float(-np.sum(w * np.log2(w)))


def entropy(rho):
    """Von Neumann entropy in bits."""
    rho = _as_density(rho)
    return _entropy_of_eigs(eigvalsh(rho.matrix, tol=CLIP_NEGATIVE))


def binary_entropy(x):
    x = min(max(float(x), 0.0), 1.0)
    return _entropy_of_eigs(np.array([x, 1.0 - x]))


def _split(rho, bip):
    """Return the A-first two-party matrix and the dimension of B."""
    rho = _as_density(rho)
    if bip is None:
        if len(rho.dims) != 2 or rho.dims[0] != 2:
            raise InvalidSubsystem(
                f"a state with dims {rho.dims} needs an explicit bipartition"
            )
        return rho.matrix, rho.dims[1]
    bip = Bipartition(bip)
    if rho.dims != (2, 2, 2):
        raise InvalidSubsystem(f"{bip.value} needs a three-qubit state, got dims {rho.dims}")
    a, b = bip.measured, bip.unmeasured
    reduced = partial_trace(rho, (a,) + b)
    return reduced.matrix, 2 ** len(b)


def _marginals(rho_ab, d_b):
    two = DensityMatrix(rho_ab, (2, d_b))
    return partial_trace(two, [0]), partial_trace(two, [1])


def mutual_information(rho, bip=None):
    rho_ab, d_b = _split(rho, bip)
    rho_a, rho_b = _marginals(rho_ab, d_b)
    return entropy(rho_a) + entropy(rho_b) - entropy(rho_ab)


def conditional_entropy_measured(rho, bip, angles):
    """Average entropy of B after the projective measurement ``angles`` on A."""
    rho_ab, d_b = _split(rho, bip)
    return float(kernels.cond_entropy_point(rho_ab, d_b, float(angles.theta), float(angles.phi)))


def _golden_section(f, lo, hi, xtol=GOLDEN_XTOL):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def measurement_grid(n_theta=GRID_THETA, n_phi=GRID_PHI):
    thetas = np.linspace(0.0, math.pi, n_theta)
    phis = 2.0 * math.pi * np.arange(n_phi) / n_phi
    return thetas, phis


def _grid_local_minima(values, limit):
    """Indices of discrete local minima of the grid, lowest first.

    theta is clamped at its ends and phi wraps around. Each pole is one
    measurement, so it contributes at most its phi = 0 entry. Ordering is by
    value, then theta index, then phi index.
    """
    v = values
    up = np.vstack([v[1:], v[-1:]])
    down = np.vstack([v[:1], v[:-1]])
    mask = (v <= up) & (v <= down) & (v <= np.roll(v, 1, axis=1)) & (v <= np.roll(v, -1, axis=1))
    mask[[0, -1], 1:] = False
    ii, jj = np.nonzero(mask)
    order = np.lexsort((jj, ii, v[ii, jj]))[:limit]
    return list(zip(ii[order], jj[order]))


def _refine(f, theta, phi, best, dtheta, dphi):
    for _ in range(REFINE_MAX_STEPS):
        start = best
        t_new, v = _golden_section(
            lambda t: f(t, phi), max(0.0, theta - dtheta), min(math.pi, theta + dtheta)
        )
        if v < best:
            theta, best = t_new, v
        p_new, v = _golden_section(lambda p: f(theta, p), phi - dphi, phi + dphi)
        if v < best:
            phi, best = p_new % (2.0 * math.pi), v
        if start - best < REFINE_TOL:
            break
    return best, theta, phi


def minimize_conditional_entropy(rho_ab, d_b, n_theta=GRID_THETA, n_phi=GRID_PHI):
    """Grid search over (theta, phi) followed by alternating golden-section refinement.

    Refinement starts from the lowest few discrete local minima of the grid,
    so two nearly degenerate basins cannot trap the search in the wrong one.
    Returns the minimal average conditional entropy and its angles. Ties
    resolve to the earlier start, i.e. the smaller theta, then the smaller phi.
    """
    rho_ab = np.ascontiguousarray(rho_ab, dtype=np.complex128)
    thetas, phis = measurement_grid(n_theta, n_phi)
    values = kernels.cond_entropy_grid(rho_ab, d_b, thetas, phis)
    dtheta = math.pi / (n_theta - 1)
    dphi = 2.0 * math.pi / n_phi

    def f(t, p):
        return float(kernels.cond_entropy_point(rho_ab, d_b, t, p))

    result = None
    for i, j in _grid_local_minima(values, REFINE_STARTS):
        cand = _refine(f, float(thetas[i]), float(phis[j]), float(values[i, j]), dtheta, dphi)
        if result is None or cand[0] < result[0]:
            result = cand
    best, theta, phi = result
    return best, MeasurementAngles(theta, phi)


def classical_correlation(rho, bip=None):
    """S(rho_B) minus the minimal post-measurement conditional entropy.

    Returns ``(value, angles)`` where ``angles`` is the minimising measurement.
    """
    rho_ab, d_b = _split(rho, bip)
    _, rho_b = _marginals(rho_ab, d_b)
    cond, angles = minimize_conditional_entropy(rho_ab, d_b)
    return entropy(rho_b) - cond, angles


def xstate_violation(rho_ab):
    """Why the X-state closed form does not apply, or None if it does."""
    m = np.asarray(rho_ab)
    if m.shape != (4, 4):
        return NotXState(f"need a two-qubit state, got shape {m.shape}")
    mask = np.ones((4, 4), dtype=bool)
    mask[np.arange(4), np.arange(4)] = False
    mask[np.arange(4), 3 - np.arange(4)] = False
    off = float(np.max(np.abs(m[mask])))
    if off >= XSTATE_TOL:
        return NotXState(f"entry outside the X pattern of size {off:.3e}")
    gap = abs(m[1, 1] - m[2, 2])
    if gap > XSTATE_DIAG_TOL:
        return ConditionViolated(f"rho_22 - rho_33 = {gap:.3e}")
    return None


def _xy_measurement_phi(m):
    # direction in the xy plane maximising the correlation |T^T n|
    paulis = (np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]))
    t = np.array([[np.trace(m @ np.kron(a, b)).real for b in paulis] for a in paulis])
    u, _, _ = np.linalg.svd(t)
    return math.atan2(u[1, 0], u[0, 0]) % math.pi


def xstate_discord(rho):
    """Closed-form discord of a two-qubit X state with rho_22 = rho_33.

    The measured infimum is the smaller of the xy-plane value H(tau), with
    tau = [1 - sqrt((1 - 2(r11 + r33))^2 + 4(|r14| + |r23|)^2)] / 2,
    and the sigma_z value. H(tau) alone overshoots for states close to
    classical along z, e.g. diag(1/2, 0, 0, 1/2).
    """
    rho = _as_density(rho)
    m = rho.matrix
    err = xstate_violation(m)
    if err is not None:
        raise err
    r = m.real.diagonal()
    rho_a, rho_b = _marginals(m, 2)
    mi = entropy(rho_a) + entropy(rho_b) - entropy(m)

    radius = math.sqrt((1 - 2 * (r[0] + r[2])) ** 2 + 4 * (abs(m[0, 3]) + abs(m[1, 2])) ** 2)
    tau = min(max((1 - radius) / 2, 0.0), 0.5)
    cond_xy = binary_entropy(tau)

    cond_z = 0.0
    for p_up, p_down in ((r[0], r[1]), (r[2], r[3])):
        p = p_up + p_down
        if p > kernels.EIG_ZERO:
            cond_z += p * binary_entropy(p_up / p)

    if cond_z < cond_xy:
        cond, angles = cond_z, MeasurementAngles(0.0, 0.0)
    else:
        cond, angles = cond_xy, MeasurementAngles(math.pi / 2, _xy_measurement_phi(m))
    cc = entropy(rho_b) - cond
    return DiscordResult(mi - cc, cc, mi, angles, "xstate_analytic")


def discord(rho, bip=None, method="auto"):
    """Quantum discord D = I(A:B) - J(A|B) with projective measurements on A.

    ``method`` is ``"auto"`` (closed form whenever the reduced state is an
    X state with rho_22 = rho_33, numerical search otherwise),
    ``"xstate_analytic"`` or ``"grid_refined"``.
    """
    rho_ab, d_b = _split(rho, bip)
    if method == "auto":
        method = (
            "xstate_analytic"
            if d_b == 2 and xstate_violation(rho_ab) is None
            else "grid_refined"
        )
    if method == "xstate_analytic":
        return xstate_discord(DensityMatrix(rho_ab, (2, 2)))
    if method != "grid_refined":
        raise ValueError(f"unknown method {method!r}")
    rho_a, rho_b = _marginals(rho_ab, d_b)
    s_b = entropy(rho_b)
    mi = entropy(rho_a) + s_b - entropy(rho_ab)
    cond, angles = minimize_conditional_entropy(rho_ab, d_b)
    cc = s_b - cond
    return DiscordResult(mi - cc, cc, mi, angles, "grid_refined")
