"""Parameter sweeps, zero-temperature plateaus and critical-coupling fits."""

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from .discord import Bipartition, discord
from .spinmodel import SpinImpurityParams, make_model, thermal_state

SWEEP_PARAMETERS = {"spin": ("j1", "j"), "magnetic": ("j", "b")}
CRITICAL_THRESHOLD = 1e-6
CRITICAL_PRECISION = 1e-4
CRITICAL_LIMIT = 1e6
DEFAULT_FIT_TEMPERATURES = tuple(np.linspace(1.0, 10.0, 19))


class NoConvergence(RuntimeError):
    pass


class GapMonotonicityWarning(RuntimeWarning):
    """The discord gap grew while moving outward along a branch."""


class Branch(str, Enum):
    J1_POSITIVE = "j1_positive"
    J1_NEGATIVE = "j1_negative"

    @property
    def sign(self):
        return 1.0 if self is Branch.J1_POSITIVE else -1.0


@dataclass(frozen=True)
class SweepSpec:
    model: str
    swept: str
    start: float
    stop: float
    points: int
    fixed: dict = field(default_factory=dict)
    temperatures: tuple = (0.0,)
    bipartitions: tuple = (Bipartition.PAIR_12,)

    def __post_init__(self):
        if self.model not in SWEEP_PARAMETERS:
            raise ValueError(f"unknown model {self.model!r}")
        allowed = SWEEP_PARAMETERS[self.model]
        if self.swept not in allowed:
            raise ValueError(f"{self.model} model sweeps one of {allowed}, not {self.swept!r}")
        if self.swept in self.fixed:
            raise ValueError(f"{self.swept!r} is both swept and fixed")
        unknown = set(self.fixed) - set(allowed)
        if unknown:
            raise ValueError(f"unknown fixed parameters {sorted(unknown)}")
        if int(self.points) < 2:
            raise ValueError("a sweep needs at least 2 points")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError("sweep range must be finite")
        if any(not t >= 0 for t in self.temperatures):
            raise ValueError("temperatures must be >= 0")
        object.__setattr__(self, "points", int(self.points))
        object.__setattr__(self, "temperatures", tuple(float(t) for t in self.temperatures))
        object.__setattr__(
            self, "bipartitions", tuple(Bipartition(b) for b in self.bipartitions)
        )

    @classmethod
    def from_dict(cls, d):
        """Build from the JSON layout::

            {"model": "spin",
             "swept": {"name": "j1", "start": -6, "stop": 4, "points": 101},
             "fixed": {"j": 1},
             "temperatures": [0.5, 1.0],
             "bipartitions": ["pair_12"]}
        """
        swept = d["swept"]
        return cls(
            model=d["model"],
            swept=swept["name"],
            start=float(swept["start"]),
            stop=float(swept["stop"]),
            points=int(swept["points"]),
            fixed={k: float(v) for k, v in d.get("fixed", {}).items()},
            temperatures=tuple(d.get("temperatures", (0.0,))),
            bipartitions=tuple(d.get("bipartitions", ("pair_12",))),
        )

    def values(self):
        return np.linspace(self.start, self.stop, self.points)

    def model_at(self, value):
        params = {"j": 1.0, **self.fixed, self.swept: float(value)}
        return make_model(self.model, **params)


@dataclass(frozen=True)
class SweepRow:
    model: str
    j1: float | None
    j: float
    b: float | None
    temp: float
    bipartition: str
    mutual_information: float
    classical_correlation: float
    discord: float
    method: str

    def as_dict(self):
        return asdict(self)


COLUMNS = tuple(SweepRow.__dataclass_fields__)


def evaluate(model, t, bip):
    """One sweep row: thermal state of ``model`` at ``t``, discord across ``bip``."""
    bip = Bipartition(bip)
    res = discord(thermal_state(model, t), bip)
    return SweepRow(
        model=model.family,
        j1=getattr(model, "j1", None),
        j=model.j,
        b=getattr(model, "b", None),
        temp=float(t),
        bipartition=bip.value,
        mutual_information=res.mutual_information,
        classical_correlation=res.classical_correlation,
        discord=res.discord,
        method=res.method,
    )


def _evaluate_args(args):
    return evaluate(*args)


def _ordered_map(func, items, workers):
    if workers is None or workers <= 1 or len(items) < 2:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (4 * workers))))


def run_sweep(spec, workers=None):
    """Evaluate every (value, temperature, bipartition) cell of ``spec``.

    Rows come back parameter-major, then temperature, then bipartition,
    whatever the number of worker processes.
    """
    jobs = [
        (spec.model_at(v), t, bip)
        for v in spec.values()
        for t in spec.temperatures
        for bip in spec.bipartitions
    ]
    return _ordered_map(_evaluate_args, jobs, workers)


def zero_temperature_discord(model, bip):
    return discord(thermal_state(model, 0.0), Bipartition(bip)).discord


def branch_seed(j, branch):
    """First J1 inside the ground-state regime that the branch runs into."""
    branch = Branch(branch)
    if branch is Branch.J1_POSITIVE:
        return max(j, 0.0) + 1.0
    return min(-2.0 * j, 0.0) - 1.0


def plateau_discord(j, branch, bip):
    """Zero-temperature discord on the branch; constant across the regime."""
    return zero_temperature_discord(SpinImpurityParams(branch_seed(j, branch), j), bip)


def discord_gap(j1, j, t, bip, reference):
    """|D(T=0 reference) - D(T)| for the spin-impurity ring at coupling ``j1``."""
    d_t = discord(thermal_state(SpinImpurityParams(j1, j), t), bip).discord
    if isinstance(reference, str):
        if reference != "local":
            raise ValueError(f"unknown gap reference {reference!r}")
        reference = zero_temperature_discord(SpinImpurityParams(j1, j), bip)
    return abs(reference - d_t)


def find_critical_coupling(
    j,
    t,
    branch,
    threshold=CRITICAL_THRESHOLD,
    bip=Bipartition.PAIR_12,
    gap_reference="plateau",
    precision=CRITICAL_PRECISION,
    limit=CRITICAL_LIMIT,
):
    """Coupling J1c beyond which the thermal discord sits on its T=0 plateau.

    Starting from the branch seed, |J1| is pushed outward in doubling steps
    until the gap drops below ``threshold``; the crossing is then bisected
    to ``precision``. ``gap_reference`` is ``"plateau"`` (compare against the
    branch's asymptotic T=0 value) or ``"local"`` (T=0 value at the same J1).
    """
    if not t > 0:
        raise ValueError(f"critical coupling needs T > 0, got {t!r}")
    branch = Branch(branch)
    bip = Bipartition(bip)
    if gap_reference == "plateau":
        ref = plateau_discord(j, branch, bip)
    elif gap_reference == "local":
        ref = "local"
    else:
        raise ValueError(f"unknown gap reference {gap_reference!r}")

    def gap(x):
        return discord_gap(x, j, t, bip, ref)

    seed = branch_seed(j, branch)
    prev = gap(seed)
    if prev < threshold:
        return seed
    inside, step = seed, 1.0
    while True:
        x = seed + branch.sign * step
        if abs(x) > limit:
            raise NoConvergence(
                f"gap still {prev:.3e} >= {threshold:.1e} at J1 = {inside:g} "
                f"(j={j}, T={t}, {branch.value}, {bip.value})"
            )
        g = gap(x)
        if g > prev:
            warnings.warn(
                f"discord gap rose from {prev:.3e} to {g:.3e} between J1 = {inside:g} "
                f"and {x:g} (j={j}, T={t}, {branch.value}, {bip.value})",
                GapMonotonicityWarning,
                stacklevel=2,
            )
        if g < threshold:
            break
        inside, prev, step = x, g, 2.0 * step
    lo, hi = inside, x
    while abs(hi - lo) > precision:
        mid = 0.5 * (lo + hi)
        if gap(mid) < threshold:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class CriticalFit:
    slope: float
    intercept: float
    rms_residual: float
    branch: str
    sample_temperatures: tuple
    samples: tuple = ()


def fit_line(x, y):
    """Ordinary least squares ``y = slope * x + intercept`` and its RMS residual."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2:
        raise ValueError("a line fit needs at least 2 points")
    slope, intercept = np.polyfit(x, y, 1)
    rms = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), float(intercept), rms


def _critical_args(args):
    return find_critical_coupling(*args)


def fit_critical_line(
    j,
    branch,
    bip=Bipartition.PAIR_12,
    temperatures=DEFAULT_FIT_TEMPERATURES,
    threshold=CRITICAL_THRESHOLD,
    gap_reference="plateau",
    workers=None,
):
    temps = tuple(float(t) for t in temperatures)
    if len(temps) < 2:
        raise ValueError("need at least 2 temperatures")
    if any(not t > 0 for t in temps):
        raise ValueError("fit temperatures must be > 0")
    branch = Branch(branch)
    bip = Bipartition(bip)
    jobs = [(j, t, branch, threshold, bip, gap_reference) for t in temps]
    samples = _ordered_map(_critical_args, jobs, workers)
    slope, intercept, rms = fit_line(temps, samples)
    return CriticalFit(slope, intercept, rms, branch.value, temps, tuple(samples))


FIGURE_TEMPERATURES = (0.5, 1.0, 1.5)
FIGURE_BIPARTITIONS = {
    1: (Bipartition.PAIR_12,),
    2: (Bipartition.PAIR_23,),
    3: (Bipartition.ONE_VS_REST_1_23,),
    4: (Bipartition.PAIR_12, Bipartition.PAIR_23),
}
PANEL_J = {"a": 1.0, "b": -1.0}


def figure_spec(figure, panel=None):
    """Sweep behind one of the four discord figures."""
    if figure == 4:
        return SweepSpec(
            model="magnetic",
            swept="b",
            start=0.0,
            stop=20.0,
            points=401,
            fixed={"j": 1.0},
            temperatures=(0.25,),
            bipartitions=FIGURE_BIPARTITIONS[4],
        )
    if figure not in (1, 2, 3):
        raise ValueError(f"unknown figure {figure!r}")
    if panel not in PANEL_J:
        raise ValueError(f"figure {figure} needs panel 'a' or 'b', got {panel!r}")
    return SweepSpec(
        model="spin",
        swept="j1",
        start=-12.0,
        stop=8.0,
        points=401,
        fixed={"j": PANEL_J[panel]},
        temperatures=FIGURE_TEMPERATURES,
        bipartitions=FIGURE_BIPARTITIONS[figure],
    )

