"""Constant-volume box shapes, entropy gaps between shapes, and reallocation traces.

A trajectory is traversed quasistatically: every sample is the exact
stable-equilibrium (canonical) state of the instantaneous box, at either a
fixed temperature or a fixed energy. As the shape changes, occupations move
between energy eigenstates; the step between samples is measured by the
total variation distance between occupation vectors, with levels matched
by their quantum numbers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from .composite import gibbs_ratio_residual, product_state
from .equilibrium import canonical_state
from .fundamental import quantum_box_entropy
from .hamiltonians import BoxShape, box_spectrum_for_beta

VOLUME_RTOL = 1e-12
TAIL_TOL = 1e-8
DEFAULT_RETAINED = 64


def isochoric_family(volume: float, aspect: tuple[float, float]) -> BoxShape:
    """Box of the given volume with b/c = r_b and c/d = r_c."""
    r_b, r_c = aspect
    for name, v in (("volume", volume), ("r_b", r_b), ("r_c", r_c)):
        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"{name} must be positive, got {v!r}")
    d = (volume / (r_b * r_c * r_c)) ** (1.0 / 3.0)
    c = r_c * d
    return BoxShape(r_b * c, c, d)


def _check_equal_volume(a: BoxShape, b: BoxShape):
    va, vb = a.volume(), b.volume()
    if abs(va - vb) > VOLUME_RTOL * va:
        raise ValueError(f"shapes have unequal volumes {va!r} and {vb!r}")


def entropy_gap(shape_a: BoxShape, shape_b: BoxShape, energy: float, tail_tol: float = TAIL_TOL) -> float:
    """|S_A(E) - S_B(E)| for canonical states at the same mean energy and volume."""
    _check_equal_volume(shape_a, shape_b)
    if shape_a == shape_b:
        return 0.0
    s_a = quantum_box_entropy(energy, shape_a, tail_tol)[0]
    s_b = quantum_box_entropy(energy, shape_b, tail_tol)[0]
    return abs(s_a - s_b)


@dataclass(frozen=True)
class GapRow:
    energy: float
    gap: float
    relative_gap: float
    entropy_a: float
    entropy_b: float


def semiclassical_scan(shape_a: BoxShape, shape_b: BoxShape, energies, tail_tol: float = TAIL_TOL) -> list[GapRow]:
    """Entropy gap between two equal-volume shapes over a grid of energies, sorted by E."""
    _check_equal_volume(shape_a, shape_b)
    rows = []
    for E in sorted(float(x) for x in energies):
        s_a = quantum_box_entropy(E, shape_a, tail_tol)[0]
        s_b = s_a if shape_a == shape_b else quantum_box_entropy(E, shape_b, tail_tol)[0]
        gap = abs(s_a - s_b)
        rows.append(GapRow(E, gap, gap / abs(s_a), s_a, s_b))
    return rows


@dataclass(frozen=True)
class ShapeTrajectory:
    """Timed shapes at a common volume, run at constant T or constant E.

    ``mode`` is ``"constant_temperature"`` (``value`` = T) or
    ``"constant_energy"`` (``value`` = E).
    """

    times: tuple[float, ...]
    shapes: tuple[BoxShape, ...]
    mode: str
    value: float
    k: float = 1.0

    def __post_init__(self):
        if self.mode not in ("constant_temperature", "constant_energy"):
            raise ValueError(f"unknown trajectory mode {self.mode!r}")
        if len(self.times) != len(self.shapes) or not self.shapes:
            raise ValueError("trajectory needs one shape per time and at least one sample")
        t = np.asarray(self.times, dtype=float)
        if np.any(np.diff(t) <= 0):
            raise ValueError("trajectory times must be strictly increasing")
        v0 = self.shapes[0].volume()
        for i, s in enumerate(self.shapes):
            if abs(s.volume() - v0) > VOLUME_RTOL * v0:
                raise ValueError(f"sample {i} has volume {s.volume()!r}, expected {v0!r}")
        if not (self.value > 0 and math.isfinite(self.value)):
            raise ValueError(f"{'temperature' if self.mode == 'constant_temperature' else 'energy'} must be positive")

    @property
    def volume(self) -> float:
        return self.shapes[0].volume()

    @classmethod
    def from_aspects(cls, times, aspects, volume: float, mode: str, value: float, k: float = 1.0) -> "ShapeTrajectory":
        shapes = tuple(isochoric_family(volume, tuple(a)) for a in aspects)
        return cls(tuple(float(t) for t in times), shapes, mode, float(value), k)


_SCHEMA_PATH = Path(__file__).with_name("schemas") / "trajectory.schema.json"


def load_trajectory(source) -> tuple[ShapeTrajectory, dict]:
    """Read a trajectory config (path, JSON text, or dict).

    Returns the trajectory and the remaining options (``retained_levels``,
    ``tail_tol``).
    """
    if isinstance(source, dict):
        cfg = source
    else:
        p = Path(source)
        text = p.read_text() if p.exists() else str(source)
        try:
            cfg = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"trajectory config is not valid JSON: {exc}") from None
    schema = json.loads(_SCHEMA_PATH.read_text())
    try:
        jsonschema.validate(cfg, schema)
    except jsonschema.ValidationError as exc:
        raise ValueError(f"trajectory config violates schema: {exc.message}") from None
    mode = cfg["mode"]
    key = "T" if mode == "constant_temperature" else "E"
    if key not in cfg:
        raise ValueError(f"mode {mode} requires field {key!r}")
    samples = cfg["samples"]
    traj = ShapeTrajectory.from_aspects(
        [s["t"] for s in samples],
        [(s["r_b"], s["r_c"]) for s in samples],
        cfg["volume"],
        mode,
        cfg[key],
        cfg.get("k", 1.0),
    )
    opts = {"retained_levels": cfg.get("retained_levels", DEFAULT_RETAINED), "tail_tol": cfg.get("tail_tol", TAIL_TOL)}
    return traj, opts


@dataclass
class ReallocationTrace:
    times: np.ndarray
    shapes: list[BoxShape]
    level_energies: np.ndarray  # (samples, m), lowest m levels
    occupations: np.ndarray  # (samples, m), matching level_energies
    entropy: np.ndarray
    energy: np.ndarray
    beta: np.ndarray
    reallocation_step: np.ndarray
    mode: str
    full_occupation_sums: np.ndarray = field(repr=False)
    states: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.times)

    def header(self) -> list[str]:
        m = self.occupations.shape[1]
        return ["t", "b", "c", "d", "beta", "energy", "entropy", "realloc_step"] + [f"p_{i}" for i in range(m)]

    def rows(self):
        for i, s in enumerate(self.shapes):
            yield [self.times[i], s.b, s.c, s.d, self.beta[i], self.energy[i], self.entropy[i], self.reallocation_step[i], *self.occupations[i]]


def _sample_state(shape: BoxShape, traj: ShapeTrajectory, tail_tol: float, index: int):
    if traj.mode == "constant_temperature":
        beta = 1.0 / (traj.k * traj.value)
        spec = box_spectrum_for_beta(shape, beta, tail_tol)
        return spec, canonical_state(spec, beta, k=traj.k)
    E = traj.value
    if not E > shape.ground_energy():
        raise ValueError(f"sample {index}: energy {E!r} is not above the ground level {shape.ground_energy()!r}")
    _, beta, spec = quantum_box_entropy(E, shape, tail_tol, traj.k)
    return spec, canonical_state(spec, beta, k=traj.k)


def total_variation(keys_a, p_a, keys_b, p_b) -> float:
    """1/2 sum |p - q| over the union of two labelled level sets (missing = 0)."""
    union = np.union1d(keys_a, keys_b)
    qa = np.zeros(union.size)
    qb = np.zeros(union.size)
    qa[np.searchsorted(union, keys_a)] = p_a
    qb[np.searchsorted(union, keys_b)] = p_b
    return 0.5 * float(np.abs(qa - qb).sum())


def trajectory_run(
    traj: ShapeTrajectory,
    retained_levels: int = DEFAULT_RETAINED,
    tail_tol: float = TAIL_TOL,
    keep_states: bool = False,
) -> ReallocationTrace:
    """Quasistatic run: one exact canonical state per sample.

    The full cutoff spectrum is used for the state and for the
    reallocation step; only the lowest ``retained_levels`` are stored.
    """
    n = len(traj.shapes)
    m = retained_levels
    lev = np.full((n, m), np.nan)
    occ = np.full((n, m), np.nan)
    S, E, B, step, sums = (np.zeros(n) for _ in range(5))
    states = []
    prev = None
    for i, shape in enumerate(traj.shapes):
        spec, st = _sample_state(shape, traj, tail_tol, i)
        keys = spec.keys()
        j = min(m, len(st.occupations))
        lev[i, :j] = st.energies[:j]
        occ[i, :j] = st.occupations[:j]
        S[i], E[i], B[i] = st.entropy, st.energy, st.beta
        sums[i] = float(st.occupations.sum())
        if prev is not None:
            step[i] = total_variation(prev[0], prev[1], keys, st.occupations)
        prev = (keys, st.occupations)
        if keep_states:
            states.append((spec, st))
    return ReallocationTrace(np.asarray(traj.times, float), list(traj.shapes), lev, occ, S, E, B, step, traj.mode, sums, states)


def two_phase_gibbs_ratio(
    traj_s: ShapeTrajectory,
    traj_c: ShapeTrajectory,
    tail_tol: float = TAIL_TOL,
    max_pairs: int = 10_000,
    seed: int = 0,
) -> np.ndarray:
    """Per-sample occupation/eigenvalue residual for a solvent-colloid pair at one temperature."""
    if traj_s.mode != "constant_temperature" or traj_c.mode != "constant_temperature":
        raise ValueError("two-phase check needs constant-temperature trajectories")
    if len(traj_s.shapes) != len(traj_c.shapes):
        raise ValueError("phases must have the same number of samples")
    if traj_s.value != traj_c.value or traj_s.k != traj_c.k:
        raise ValueError("phases must share one temperature")
    out = np.empty(len(traj_s.shapes))
    for i, (a, b) in enumerate(zip(traj_s.shapes, traj_c.shapes)):
        _, st_a = _sample_state(a, traj_s, tail_tol, i)
        _, st_b = _sample_state(b, traj_c, tail_tol, i)
        out[i] = gibbs_ratio_residual(product_state(st_a, st_b), traj_s.value, max_pairs=max_pairs, seed=seed + i)
    return out


def sinuous_trajectory(samples: int = 200, volume: float = 1.0, temperature: float = 20.0, t_end: float = 2 * math.pi) -> ShapeTrajectory:
    """r_b(t) = 1 + 0.3 sin t, r_c(t) = 1 + 0.3 cos 2t at constant temperature."""
    t = np.linspace(0.0, t_end, samples)
    aspects = np.stack([1 + 0.3 * np.sin(t), 1 + 0.3 * np.cos(2 * t)], axis=1)
    return ShapeTrajectory.from_aspects(t, aspects, volume, "constant_temperature", temperature)
