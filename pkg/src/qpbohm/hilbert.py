"""Finite-dimensional complex Hilbert space primitives.

Normalized state vectors, Hermitian observables, spectral decompositions
into mutually orthogonal projectors, density operators, inner products and
Kronecker products.  Everything is dense numpy; the intended dimensions
(up to ~1024 for grid-discretized problems) make dense simple and fast
enough.  All container types are immutable after construction and safe to
share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import DimMismatch, NonHermitian

HERMITICITY_TOL = 1e-12
STATE_NORM_TOL = 1e-12
PROJECTOR_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-9
DENSITY_EIGVAL_FLOOR = -1e-10


def _complex_vector(values: Any) -> np.ndarray:
    v = np.asarray(values, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"expected a nonempty 1-D amplitude vector, got shape {v.shape}")
    return v


def _complex_matrix(values: Any) -> np.ndarray:
    m = np.asarray(values, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {m.shape}")
    return m


def _frozen(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """A normalized pure state on a finite-dimensional space."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = _complex_vector(self.amplitudes)
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > STATE_NORM_TOL:
            raise ValueError(f"state vector is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
        object.__setattr__(self, "amplitudes", _frozen(v))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @classmethod
    def normalized(cls, values: Any) -> "StateVector":
        """Build a state from arbitrary amplitudes, dividing out the norm."""
        v = _complex_vector(values)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(v / norm)

    @classmethod
    def basis_state(cls, dim: int, index: int) -> "StateVector":
        v = np.zeros(dim, dtype=complex)
        v[index] = 1.0
        return cls(v)

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "re": self.amplitudes.real.tolist(),
            "im": self.amplitudes.imag.tolist(),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "StateVector":
        v = np.asarray(doc["re"], dtype=float) + 1j * np.asarray(doc["im"], dtype=float)
        if v.shape != (doc["dim"],):
            raise ValueError(f"amplitude length {v.shape} does not match dim {doc['dim']}")
        return cls(v)


@dataclass(frozen=True, eq=False)
class Observable:
    """A Hermitian matrix with real outcomes; Hermiticity is enforced."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _complex_matrix(self.matrix)
        defect = np.max(np.abs(m - m.conj().T))
        if defect > HERMITICITY_TOL:
            raise NonHermitian(f"matrix is not Hermitian: max|M - M^dag| = {defect:.3e}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def to_json_dict(self) -> dict:
        flat = self.matrix.reshape(-1)
        return {"dim": self.dim, "re": flat.real.tolist(), "im": flat.imag.tolist()}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Observable":
        n = doc["dim"]
        flat = np.asarray(doc["re"], dtype=float) + 1j * np.asarray(doc["im"], dtype=float)
        if flat.shape != (n * n,):
            raise ValueError(f"matrix entry count {flat.shape[0]} does not match dim {n}")
        return cls(flat.reshape(n, n))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A mixed state: Hermitian, unit trace, positive semidefinite."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _complex_matrix(self.matrix)
        defect = np.max(np.abs(m - m.conj().T))
        if defect > HERMITICITY_TOL:
            raise NonHermitian(f"density matrix is not Hermitian: {defect:.3e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > HERMITICITY_TOL:
            raise ValueError(f"density matrix trace deviates from 1 by {abs(tr - 1.0):.3e}")
        lo = np.linalg.eigvalsh(m).min()
        if lo < DENSITY_EIGVAL_FLOOR:
            raise ValueError(f"density matrix has a negative eigenvalue: {lo:.3e}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, psi: StateVector) -> "DensityOperator":
        return cls(np.outer(psi.amplitudes, psi.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Distinct real eigenvalues with their orthogonal spectral projectors.

    Eigenvalues are strictly ascending; each projector may have rank > 1
    when nearby eigenvalues were merged.  Idempotency, Hermiticity, mutual
    orthogonality and completeness are all checked on construction.
    """

    eigenvalues: np.ndarray
    projectors: tuple[np.ndarray, ...]

    def __post_init__(self):
        evs = np.asarray(self.eigenvalues, dtype=float)
        if evs.ndim != 1 or evs.size == 0:
            raise ValueError("eigenvalues must be a nonempty 1-D real array")
        if np.any(np.diff(evs) <= 0):
            raise ValueError("eigenvalues must be strictly ascending")
        projs = tuple(_frozen(_complex_matrix(p)) for p in self.projectors)
        if len(projs) != evs.size:
            raise ValueError("one projector required per distinct eigenvalue")
        n = projs[0].shape[0]
        for p in projs:
            if p.shape != (n, n):
                raise DimMismatch("projectors must share one dimension")
            if np.max(np.abs(p @ p - p)) > PROJECTOR_TOL:
                raise ValueError("projector is not idempotent within tolerance")
            if np.max(np.abs(p - p.conj().T)) > PROJECTOR_TOL:
                raise ValueError("projector is not Hermitian within tolerance")
        for i in range(len(projs)):
            for j in range(i + 1, len(projs)):
                if np.max(np.abs(projs[i] @ projs[j])) > PROJECTOR_TOL:
                    raise ValueError("projectors are not mutually orthogonal")
        if np.max(np.abs(sum(projs) - np.eye(n))) > PROJECTOR_TOL:
            raise ValueError("projectors do not resolve the identity")
        object.__setattr__(self, "eigenvalues", _frozen(evs))
        object.__setattr__(self, "projectors", projs)

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return self.eigenvalues.size

    def projector_for(self, indices) -> np.ndarray:
        """Sum of the projectors selected by outcome positions."""
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for i in indices:
            out = out + self.projectors[i]
        return out


def inner(phi: StateVector, psi: StateVector) -> complex:
    """Hermitian inner product, conjugate-linear in the first argument."""
    if phi.dim != psi.dim:
        raise DimMismatch(f"dims differ: {phi.dim} vs {psi.dim}")
    return complex(np.vdot(phi.amplitudes, psi.amplitudes))


def projector_onto(chi: StateVector) -> np.ndarray:
    """Rank-1 orthogonal projector onto the given normalized state."""
    return np.outer(chi.amplitudes, chi.amplitudes.conj())


def tensor(x, y):
    """Kronecker product of two states or two observables.

    Composite index convention: (i1, i2) -> i1 * dim2 + i2.
    """
    if isinstance(x, StateVector) and isinstance(y, StateVector):
        return StateVector(np.kron(x.amplitudes, y.amplitudes))
    if isinstance(x, Observable) and isinstance(y, Observable):
        return Observable(np.kron(x.matrix, y.matrix))
    raise TypeError("tensor requires two StateVectors or two Observables")


def spectral_decompose(A: Observable, degeneracy_tol: float | None = None) -> SpectralDecomposition:
    """Eigendecompose a Hermitian observable into merged spectral projectors.

    Eigenvalues closer than ``degeneracy_tol`` are clustered into a single
    projector of the summed rank (default tolerance: 1e-9 times the
    spectral radius).  Each projector is re-symmetrized to suppress
    round-off from the eigenvector outer products.
    """
    evals, evecs = np.linalg.eigh(A.matrix)
    if degeneracy_tol is None:
        radius = float(np.max(np.abs(evals)))
        degeneracy_tol = 1e-9 * radius if radius > 0 else 1e-12
    elif degeneracy_tol <= 0:
        raise ValueError("degeneracy_tol must be positive")

    clusters: list[list[int]] = [[0]]
    for k in range(1, evals.size):
        if evals[k] - evals[clusters[-1][-1]] <= degeneracy_tol:
            clusters[-1].append(k)
        else:
            clusters.append([k])

    merged_vals = []
    projectors = []
    for cluster in clusters:
        vecs = evecs[:, cluster]
        p = vecs @ vecs.conj().T
        p = (p + p.conj().T) / 2.0
        projectors.append(p)
        merged_vals.append(float(np.mean(evals[cluster])))

    decomp = SpectralDecomposition(np.asarray(merged_vals), tuple(projectors))
    rebuilt = sum(a * p for a, p in zip(decomp.eigenvalues, decomp.projectors))
    defect = np.max(np.abs(rebuilt - A.matrix))
    if defect > RECONSTRUCTION_TOL:
        raise ValueError(f"spectral reconstruction defect {defect:.3e} exceeds tolerance")
    return decomp


def expectation(state: StateVector | DensityOperator, op: np.ndarray) -> complex:
    """<psi|op|psi> for a pure state, Tr[rho op] for a density operator."""
    if isinstance(state, StateVector):
        if op.shape[0] != state.dim:
            raise DimMismatch(f"operator dim {op.shape[0]} vs state dim {state.dim}")
        return complex(np.vdot(state.amplitudes, op @ state.amplitudes))
    if isinstance(state, DensityOperator):
        if op.shape[0] != state.dim:
            raise DimMismatch(f"operator dim {op.shape[0]} vs state dim {state.dim}")
        return complex(np.trace(state.matrix @ op))
    raise TypeError("state must be a StateVector or a DensityOperator")
