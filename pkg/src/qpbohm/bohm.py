"""Guided trajectories for a scalar particle on a 1-D grid.

The wavefunction evolves under the Schrodinger equation via Crank-Nicolson
steps (unconditionally stable and norm preserving); particle positions are
sampled from the position density and transported along the velocity field
(hbar/m) Im(psi'/psi).  The position-conditioned value of an arbitrary
observable is the alpha-mixed ratio <x|A|psi>/<x|psi> and its conjugate;
at alpha=1/2 it is the real local expectation value, and its density
average reproduces <psi|A|psi> for every alpha.

Grid convention: cell points x_i = x_min + i*dx with Dirichlet walls; the
position kets are the grid basis vectors scaled by 1/sqrt(dx) so that
amplitudes carry wavefunction units and dx*sum(|psi|^2) = 1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .alpha import as_alpha
from .errors import GridMismatch, NodeEncounter, SolverFailure
from .hilbert import Observable, StateVector

NODE_FLOOR_FACTOR = 1e-12
WAVE_NORM_TOL = 1e-8


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1-D spatial grid with hard-wall boundaries."""

    n_points: int
    x_min: float
    x_max: float

    def __post_init__(self):
        if self.n_points < 8:
            raise ValueError("grid needs at least 8 points")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)


@dataclass(frozen=True)
class BohmConfig:
    """Physical constants, time step, and potential for a simulation run."""

    hbar: float = 1.0
    mass: float = 1.0
    dt: float = 1e-3
    potential: Callable[[np.ndarray], np.ndarray] | np.ndarray | None = None

    def __post_init__(self):
        for name in ("hbar", "mass", "dt"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    def potential_on(self, grid: Grid1D) -> np.ndarray:
        if self.potential is None:
            return np.zeros(grid.n_points)
        if callable(self.potential):
            return np.asarray(self.potential(grid.points), dtype=float)
        v = np.asarray(self.potential, dtype=float)
        if v.shape != (grid.n_points,):
            raise ValueError(f"potential table has shape {v.shape}, grid has {grid.n_points} points")
        return v


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex amplitudes on a grid, normalized so dx*sum(|psi|^2) = 1."""

    grid: Grid1D
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.grid.n_points,):
            raise GridMismatch("amplitude count does not match the grid")
        total = self.grid.dx * np.sum(np.abs(amps) ** 2)
        if abs(total - 1.0) > WAVE_NORM_TOL:
            raise ValueError(f"wavefunction norm deviates from 1 by {abs(total - 1.0):.3e}")
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def gaussian(cls, grid: Grid1D, x0: float, sigma0: float, k0: float = 0.0) -> "WaveFunction":
        """Gaussian packet with position spread sigma0 and carrier wavenumber k0."""
        x = grid.points
        raw = np.exp(-((x - x0) ** 2) / (4.0 * sigma0**2) + 1j * k0 * x)
        raw /= np.sqrt(grid.dx * np.sum(np.abs(raw) ** 2))
        return cls(grid, raw)

    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def to_state_vector(self) -> StateVector:
        """Unit vector in the scaled grid basis (renormalized exactly)."""
        v = self.amplitudes * np.sqrt(self.grid.dx)
        return StateVector(v / np.linalg.norm(v))


@dataclass(frozen=True, eq=False)
class ValueField:
    """A per-point observable value; entries at density nodes are flagged."""

    grid: Grid1D
    values: np.ndarray
    defined: np.ndarray
    alpha: complex
    observable_tag: str = ""


@dataclass(frozen=True, eq=False)
class TrajectoryEnsemble:
    """Positions of an ensemble of guided trajectories over time.

    ``positions[j, k]`` is trajectory k at ``times[j]``.  In one dimension
    exact trajectories cannot cross; ``ordering_preserved`` records whether
    the integrated ensemble kept its initial ordering.
    """

    times: np.ndarray
    positions: np.ndarray
    seed: int
    ordering_preserved: bool

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        p = np.asarray(self.positions, dtype=float)
        if p.ndim != 2 or p.shape[0] != t.size or p.shape[1] < 1:
            raise ValueError("positions must have shape (n_times, n_trajectories >= 1)")
        t.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "positions", p)


def position_operator(grid: Grid1D) -> Observable:
    """Diagonal position observable on the grid basis."""
    return Observable(np.diag(grid.points).astype(complex))


def momentum_operator(grid: Grid1D, hbar: float = 1.0) -> Observable:
    """Centered-difference momentum -i*hbar*d/dx with hard-wall truncation."""
    n = grid.n_points
    c = hbar / (2.0 * grid.dx)
    m = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    m[idx, idx + 1] = -1j * c
    m[idx + 1, idx] = 1j * c
    return Observable(m)


def build_hamiltonian(grid: Grid1D, cfg: BohmConfig) -> Observable:
    """Kinetic three-point stencil plus diagonal potential, Dirichlet walls."""
    n = grid.n_points
    t = cfg.hbar**2 / (2.0 * cfg.mass * grid.dx**2)
    h = np.zeros((n, n), dtype=complex)
    diag = np.arange(n)
    h[diag, diag] = 2.0 * t + cfg.potential_on(grid)
    off = np.arange(n - 1)
    h[off, off + 1] = -t
    h[off + 1, off] = -t
    return Observable(h)


class _CrankNicolsonStepper:
    """Factored implicit midpoint stepper, reused across many steps."""

    def __init__(self, H: Observable, cfg: BohmConfig):
        n = H.dim
        z = 1j * cfg.dt / (2.0 * cfg.hbar)
        gershgorin = float(np.max(np.sum(np.abs(H.matrix), axis=1)))
        if cfg.dt * gershgorin / cfg.hbar > 0.5:
            warnings.warn(
                f"dt*max|E|/hbar ~ {cfg.dt * gershgorin / cfg.hbar:.2f} > 0.5; "
                "the stepper is stable but fast phases are under-resolved",
                RuntimeWarning,
                stacklevel=3,
            )
        self._implicit = np.eye(n, dtype=complex) + z * H.matrix
        self._explicit = np.eye(n, dtype=complex) - z * H.matrix
        try:
            self._lu = lu_factor(self._implicit)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - singular only if dt invalid
            raise SolverFailure(f"cannot factor the implicit operator: {exc}") from exc

    def step(self, amps: np.ndarray) -> np.ndarray:
        out = lu_solve(self._lu, self._explicit @ amps)
        if not np.all(np.isfinite(out)):
            raise SolverFailure("implicit solve produced non-finite amplitudes")
        return out


def evolve(psi: WaveFunction, H: Observable, cfg: BohmConfig, n_steps: int) -> WaveFunction:
    """Advance the wavefunction n_steps Crank-Nicolson steps of size cfg.dt."""
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    if H.dim != psi.grid.n_points:
        raise GridMismatch("Hamiltonian dimension does not match the grid")
    if n_steps == 0:
        return psi
    stepper = _CrankNicolsonStepper(H, cfg)
    amps = psi.amplitudes.copy()
    for _ in range(n_steps):
        amps = stepper.step(amps)
    return WaveFunction(psi.grid, amps)


def _node_mask(amps: np.ndarray) -> np.ndarray:
    density = np.abs(amps) ** 2
    return density > NODE_FLOOR_FACTOR * density.max()


def _velocity_values(amps: np.ndarray, grid: Grid1D, cfg: BohmConfig) -> tuple[np.ndarray, np.ndarray]:
    padded = np.concatenate(([0.0 + 0.0j], amps, [0.0 + 0.0j]))
    deriv = (padded[2:] - padded[:-2]) / (2.0 * grid.dx)
    defined = _node_mask(amps)
    v = np.full(grid.n_points, np.nan)
    v[defined] = (cfg.hbar / cfg.mass) * np.imag(deriv[defined] / amps[defined])
    return v, defined


def velocity_field(psi: WaveFunction, cfg: BohmConfig) -> tuple[np.ndarray, np.ndarray]:
    """Guiding velocity (hbar/m) Im(psi'/psi) and its defined-point mask.

    The derivative is the centered difference with hard-wall padding, so it
    matches the momentum stencil pointwise.  Entries where the density is
    below the node floor are NaN and flagged False.
    """
    return _velocity_values(psi.amplitudes, psi.grid, cfg)


def local_value(A: Observable, psi: WaveFunction, alpha) -> ValueField:
    """Position-conditioned value of A: the alpha-mixed amplitude ratio.

    values[i] = a*(A psi)_i/psi_i + (1-a)*conj((A psi)_i/psi_i).  Real for
    alpha=1/2.  Density nodes are NaN and flagged.
    """
    a = as_alpha(alpha)
    if A.dim != psi.grid.n_points:
        raise GridMismatch("observable dimension does not match the grid")
    amps = psi.amplitudes
    image = A.matrix @ amps
    defined = _node_mask(amps)
    values = np.full(psi.grid.n_points, np.nan + 1j * np.nan, dtype=complex)
    ratio = image[defined] / amps[defined]
    values[defined] = a * ratio + (1.0 - a) * np.conj(ratio)
    return ValueField(grid=psi.grid, values=values, defined=defined, alpha=a, observable_tag="")


def ensemble_average(field: ValueField, psi: WaveFunction) -> complex:
    """Density-weighted average dx*sum(field*|psi|^2) over defined points.

    Flagged nodes are excluded; their weight is below the node floor, so
    the result matches <psi|A|psi> for any alpha up to that truncation.
    """
    if field.grid != psi.grid:
        raise GridMismatch("field and wavefunction live on different grids")
    w = psi.density()[field.defined]
    return complex(psi.grid.dx * np.sum(field.values[field.defined] * w))


def sample_initial_positions(psi: WaveFunction, m_samples: int, seed: int) -> np.ndarray:
    """Draw positions from the cell-discretized position density.

    Inverse-CDF sampling over cells with uniform intra-cell jitter; a fixed
    seed fixes the output exactly.
    """
    if m_samples < 1:
        raise ValueError("m_samples must be at least 1")
    probs = psi.density()
    probs = probs / probs.sum()
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    rng = np.random.default_rng(seed)
    cells = np.searchsorted(cdf, rng.random(m_samples), side="right")
    jitter = rng.random(m_samples) - 0.5
    x = psi.grid.points[cells] + jitter * psi.grid.dx
    return np.clip(x, psi.grid.x_min, psi.grid.x_max)


def _interp_velocity(x: np.ndarray, grid_points: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.interp(x, grid_points, v)


def integrate_trajectories(
    psi0: WaveFunction,
    H: Observable,
    cfg: BohmConfig,
    x0_list: np.ndarray,
    t_final: float,
    seed: int = 0,
) -> TrajectoryEnsemble:
    """Transport start points along the guiding field while psi evolves.

    The wavefunction advances one Crank-Nicolson step per time step; each
    position advances by a four-stage Runge-Kutta rule whose first two
    stages read the velocity snapshot at the step start and the last two
    the snapshot at the step end (the midpoint stages are equidistant from
    both, and this split keeps the scheme second order in time overall).
    Positions are interpolated linearly between grid points.  A trajectory
    that reaches a flagged node region raises NodeEncounter.
    """
    n_steps = int(round(t_final / cfg.dt))
    if abs(n_steps * cfg.dt - t_final) > 1e-9 * max(cfg.dt, abs(t_final)):
        raise ValueError("t_final must be an integer multiple of dt")
    x = np.asarray(x0_list, dtype=float).copy()
    if x.ndim != 1 or x.size < 1:
        raise ValueError("x0_list must be a nonempty 1-D array")

    grid_points = psi0.grid.points
    stepper = _CrankNicolsonStepper(H, cfg) if n_steps > 0 else None
    amps = psi0.amplitudes.copy()
    v_now, _ = _velocity_values(amps, psi0.grid, cfg)

    positions = np.empty((n_steps + 1, x.size))
    positions[0] = x
    dt = cfg.dt

    def stage(xq: np.ndarray, field: np.ndarray, step: int) -> np.ndarray:
        k = _interp_velocity(xq, grid_points, field)
        bad = np.flatnonzero(~np.isfinite(k))
        if bad.size:
            raise NodeEncounter(int(bad[0]), step, float(xq[bad[0]]))
        return k

    for j in range(n_steps):
        amps = stepper.step(amps)
        v_next, _ = _velocity_values(amps, psi0.grid, cfg)
        k1 = stage(x, v_now, j)
        k2 = stage(x + 0.5 * dt * k1, v_now, j)
        k3 = stage(x + 0.5 * dt * k2, v_next, j)
        k4 = stage(x + dt * k3, v_next, j)
        x = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        np.clip(x, psi0.grid.x_min, psi0.grid.x_max, out=x)
        positions[j + 1] = x
        v_now = v_next

    order = np.argsort(positions[0], kind="stable")
    preserved = bool(np.all(np.diff(positions[-1][order]) >= -1e-12))
    times = np.arange(n_steps + 1) * dt
    return TrajectoryEnsemble(times=times, positions=positions, seed=seed, ordering_preserved=preserved)


def _density_cdf(psi: WaveFunction) -> tuple[np.ndarray, np.ndarray]:
    """Piecewise-linear CDF of the cell-based position density."""
    pts = psi.grid.points
    edges = np.empty(pts.size + 1)
    edges[0] = psi.grid.x_min
    edges[-1] = psi.grid.x_max
    edges[1:-1] = 0.5 * (pts[:-1] + pts[1:])
    mass = psi.density() * np.diff(edges)
    mass = mass / mass.sum()
    cdf = np.concatenate(([0.0], np.cumsum(mass)))
    cdf[-1] = 1.0
    return edges, cdf


def equivariance_check(ensemble: TrajectoryEnsemble, psi_t: WaveFunction) -> float:
    """Kolmogorov-Smirnov distance of trajectory endpoints from |psi_t|^2.

    Density-distributed start points transported by the guiding field
    should remain density-distributed; the returned statistic quantifies
    the residual mismatch.
    """
    endpoints = np.sort(ensemble.positions[-1])
    edges, cdf = _density_cdf(psi_t)
    model = np.interp(endpoints, edges, cdf)
    m = endpoints.size
    upper = np.max(np.arange(1, m + 1) / m - model)
    lower = np.max(model - np.arange(0, m) / m)
    return float(max(upper, lower))
