"""Weak values and alpha-parameterized quasiprobability distributions.

A transition from a pre-selected state psi to a post-selected state phi
assigns each observable the complex weak value <phi|A|psi>/<phi|psi>.
Projector-level weak values extend to a one-complex-parameter family of
conditional quasiprobabilities; from them, joint and marginal
distributions over the outcomes of two (generally non-commuting)
observables follow by the usual rules of probability theory.  Marginals
collapse to the Born probabilities for every value of the parameter.

All distributions sum to one and are additive over disjoint outcome sets;
individual values may be negative or complex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alpha import alpha_product, as_alpha
from .errors import DimMismatch, NotProjector, OrthogonalPrePost, WrongKind
from .hilbert import (
    DensityOperator,
    Observable,
    SpectralDecomposition,
    StateVector,
    expectation,
    inner,
    projector_onto,
    spectral_decompose,
)

OVERLAP_FLOOR = 1e-12
QP_SUM_TOL = 1e-10
MARGINAL_REAL_TOL = 1e-10
PROJECTOR_CHECK_TOL = 1e-10

KINDS = ("conditional", "joint", "marginal")


@dataclass(frozen=True, eq=False)
class QPDistribution:
    """A quasiprobability distribution over measurement outcomes.

    ``outcomes`` holds real outcome values, or (reference, outcome) pairs
    for joint distributions.  Values are complex and sum to one; marginal
    distributions are additionally real and lie in [0, 1].
    """

    kind: str
    outcomes: tuple
    values: np.ndarray
    alpha: complex
    context: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        vals = np.asarray(self.values, dtype=complex)
        if vals.ndim != 1 or vals.size != len(self.outcomes):
            raise ValueError("values must be 1-D and aligned with outcomes")
        total = vals.sum()
        if abs(total - 1.0) > QP_SUM_TOL:
            raise ValueError(f"distribution sums to {total}, not 1 within {QP_SUM_TOL}")
        if self.kind == "marginal":
            if np.max(np.abs(vals.imag)) > MARGINAL_REAL_TOL:
                raise ValueError("marginal distribution has a non-real entry")
            if vals.real.min() < -MARGINAL_REAL_TOL or vals.real.max() > 1 + MARGINAL_REAL_TOL:
                raise ValueError("marginal probabilities fall outside [0, 1]")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "alpha", as_alpha(self.alpha))


@dataclass(frozen=True)
class OutcomeSet:
    """A subset of outcome positions of a spectral decomposition."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(set(idx)) != len(idx):
            raise ValueError("outcome indices must be distinct")
        if any(i < 0 for i in idx):
            raise ValueError("outcome indices must be nonnegative")
        object.__setattr__(self, "indices", idx)


@dataclass(frozen=True)
class FunctionalConditionsReport:
    """Additivity and boundary-value checks for the projector functional."""

    additivity_deviation: float
    boundary_deviations: tuple[float, float, float, float]
    tolerance: float

    @property
    def passed(self) -> bool:
        return (
            self.additivity_deviation <= self.tolerance
            and max(self.boundary_deviations) <= self.tolerance
        )


@dataclass(frozen=True)
class DeterministicReferenceReport:
    """Identity-pattern check for self-referenced conditionals."""

    max_deviation: float
    tolerance: float
    skipped_outcomes: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def _transition_overlap(psi: StateVector, phi: StateVector) -> complex:
    ov = inner(phi, psi)
    if abs(ov) <= OVERLAP_FLOOR:
        raise OrthogonalPrePost(
            f"|<phi|psi>| = {abs(ov):.3e} is at or below the floor {OVERLAP_FLOOR}"
        )
    return ov


def weak_value(A: Observable, psi: StateVector, phi: StateVector) -> complex:
    """<phi|A|psi>/<phi|psi>; generally complex, the expectation when phi=psi."""
    if A.dim != psi.dim or psi.dim != phi.dim:
        raise DimMismatch("observable and states must share one dimension")
    ov = _transition_overlap(psi, phi)
    return complex(np.vdot(phi.amplitudes, A.matrix @ psi.amplitudes)) / ov


def projector_qp_value(P: np.ndarray, psi: StateVector, phi: StateVector, alpha) -> complex:
    """Alpha-mixed projector weak value for the transition psi -> phi.

    Returns a*<phi|P|psi>/<phi|psi> + (1-a)*<psi|P|phi>/<psi|phi>.  The
    second term is the conjugate of the first, so a=1/2 yields the real
    part, a=1 the forward value, a=0 the reversed (conjugate) value.
    """
    a = as_alpha(alpha)
    P = np.asarray(P, dtype=complex)
    if np.max(np.abs(P @ P - P)) > PROJECTOR_CHECK_TOL or np.max(np.abs(P - P.conj().T)) > PROJECTOR_CHECK_TOL:
        raise NotProjector("matrix is not an orthogonal projector within tolerance")
    if P.shape[0] != psi.dim or psi.dim != phi.dim:
        raise DimMismatch("projector and states must share one dimension")
    ov = _transition_overlap(psi, phi)
    fwd = complex(np.vdot(phi.amplitudes, P @ psi.amplitudes)) / ov
    rev = complex(np.vdot(psi.amplitudes, P @ phi.amplitudes)) / np.conj(ov)
    return a * fwd + (1.0 - a) * rev


def _alpha_mixed_value(op: np.ndarray, psi: StateVector, phi: StateVector, a: complex, ov: complex) -> complex:
    fwd = complex(np.vdot(phi.amplitudes, op @ psi.amplitudes)) / ov
    rev = complex(np.vdot(psi.amplitudes, op @ phi.amplitudes)) / np.conj(ov)
    return a * fwd + (1.0 - a) * rev


def conditional_qp(
    A: Observable,
    psi: StateVector,
    phi: StateVector,
    alpha,
    degeneracy_tol: float | None = None,
) -> QPDistribution:
    """Quasiprobability of each outcome of A, conditioned on psi -> phi."""
    a = as_alpha(alpha)
    if A.dim != psi.dim or psi.dim != phi.dim:
        raise DimMismatch("observable and states must share one dimension")
    ov = _transition_overlap(psi, phi)
    decomp = spectral_decompose(A, degeneracy_tol)
    values = np.array(
        [_alpha_mixed_value(p, psi, phi, a, ov) for p in decomp.projectors], dtype=complex
    )
    return QPDistribution(
        kind="conditional",
        outcomes=tuple(decomp.eigenvalues.tolist()),
        values=values,
        alpha=a,
        context=f"transition-conditioned, dim={A.dim}",
    )


def weak_value_from_qp(qp: QPDistribution) -> complex:
    """Outcome-weighted average of a conditional distribution."""
    if qp.kind != "conditional":
        raise WrongKind(f"need a conditional distribution, got kind={qp.kind!r}")
    return complex(np.sum(np.asarray(qp.outcomes, dtype=float) * qp.values))


def check_functional_conditions(
    psi: StateVector,
    phi: StateVector,
    alpha,
    decomposition: SpectralDecomposition,
    tol: float = 1e-10,
) -> FunctionalConditionsReport:
    """Verify additivity and boundary values of the projector functional.

    Additivity is checked over the decomposition's mutually orthogonal
    projectors (every pair sum and the full resolution of the identity).
    The boundary values are 1 on the projectors onto psi and phi, and 0 on
    projectors onto vectors orthogonal to each.  Requires dim >= 3.
    """
    a = as_alpha(alpha)
    if psi.dim < 3:
        raise ValueError("the functional conditions are checked for dim >= 3")
    if psi.dim != phi.dim or decomposition.dim != psi.dim:
        raise DimMismatch("states and decomposition must share one dimension")
    ov = _transition_overlap(psi, phi)

    def f(P: np.ndarray) -> complex:
        return _alpha_mixed_value(P, psi, phi, a, ov)

    single = [f(p) for p in decomposition.projectors]
    add_dev = abs(f(np.eye(psi.dim, dtype=complex)) - sum(single))
    nproj = len(decomposition.projectors)
    for i in range(nproj):
        for j in range(i + 1, nproj):
            pair = decomposition.projectors[i] + decomposition.projectors[j]
            add_dev = max(add_dev, abs(f(pair) - single[i] - single[j]))

    def orthogonal_unit(v: StateVector) -> np.ndarray:
        k = int(np.argmin(np.abs(v.amplitudes)))
        e = np.zeros(v.dim, dtype=complex)
        e[k] = 1.0
        w = e - v.amplitudes * np.conj(v.amplitudes[k])
        return w / np.linalg.norm(w)

    psi_perp = orthogonal_unit(psi)
    phi_perp = orthogonal_unit(phi)
    boundary = (
        abs(f(projector_onto(psi)) - 1.0),
        abs(f(np.outer(psi_perp, psi_perp.conj()))),
        abs(f(projector_onto(phi)) - 1.0),
        abs(f(np.outer(phi_perp, phi_perp.conj()))),
    )
    return FunctionalConditionsReport(
        additivity_deviation=float(add_dev),
        boundary_deviations=tuple(float(b) for b in boundary),
        tolerance=tol,
    )


def joint_qp(
    B: Observable,
    A: Observable,
    state: StateVector | DensityOperator,
    alpha,
    degeneracy_tol: float | None = None,
) -> QPDistribution:
    """Joint quasiprobability over (reference outcome b, outcome a).

    Computed as the expectation of the alpha product of the two spectral
    projectors, which stays finite even where the reference outcome has
    zero probability.  Outcomes are ordered ascending in b, then in a.
    """
    a_param = as_alpha(alpha)
    if B.dim != A.dim or A.dim != state.dim:
        raise DimMismatch("observables and state must share one dimension")
    db = spectral_decompose(B, degeneracy_tol)
    da = spectral_decompose(A, degeneracy_tol)
    pairs = []
    values = []
    for b_val, pb in zip(db.eigenvalues, db.projectors):
        for a_val, pa in zip(da.eigenvalues, da.projectors):
            pairs.append((float(b_val), float(a_val)))
            values.append(expectation(state, alpha_product(pb, pa, a_param)))
    return QPDistribution(
        kind="joint",
        outcomes=tuple(pairs),
        values=np.asarray(values, dtype=complex),
        alpha=a_param,
        context=f"reference-conditioned joint, dim={A.dim}",
    )


def commutator_asymmetry(
    B: Observable,
    A: Observable,
    state: StateVector | DensityOperator,
    alpha,
    degeneracy_tol: float | None = None,
) -> np.ndarray:
    """Per-pair swap defect joint(b,a) - joint(a,b), ordered like joint_qp(B, A, ...).

    Equals (2*alpha - 1) times the expectation of the projector commutator;
    callers assert that identity.
    """
    fwd = joint_qp(B, A, state, alpha, degeneracy_tol)
    rev = joint_qp(A, B, state, alpha, degeneracy_tol)
    rev_lookup = {pair: v for pair, v in zip(rev.outcomes, rev.values)}
    out = np.empty(len(fwd.outcomes), dtype=complex)
    for k, (b_val, a_val) in enumerate(fwd.outcomes):
        out[k] = fwd.values[k] - rev_lookup[(a_val, b_val)]
    return out


def marginal_qp(
    B: Observable,
    A: Observable,
    state: StateVector | DensityOperator,
    alpha,
    degeneracy_tol: float | None = None,
) -> QPDistribution:
    """Marginal of the joint over the reference outcomes.

    Real and alpha-independent; reproduces the Born probabilities of A
    (rank-weighted for merged eigenvalues).  The numerically validated
    imaginary part is discarded.
    """
    joint = joint_qp(B, A, state, alpha, degeneracy_tol)
    a_vals = sorted({a for (_, a) in joint.outcomes})
    sums = {a: 0.0 + 0.0j for a in a_vals}
    for (_, a_val), v in zip(joint.outcomes, joint.values):
        sums[a_val] += v
    values = np.array([sums[a] for a in a_vals], dtype=complex)
    if np.max(np.abs(values.imag)) > MARGINAL_REAL_TOL:
        raise ValueError("marginal distribution failed the reality check")
    return QPDistribution(
        kind="marginal",
        outcomes=tuple(a_vals),
        values=values.real.astype(complex),
        alpha=joint.alpha,
        context=f"marginal over reference, dim={A.dim}",
    )


def born_probabilities(
    A: Observable,
    state: StateVector | DensityOperator,
    degeneracy_tol: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Outcome values and Born probabilities of A in the given state."""
    decomp = spectral_decompose(A, degeneracy_tol)
    probs = np.array([expectation(state, p).real for p in decomp.projectors])
    return decomp.eigenvalues.copy(), probs


def qp_of_set(
    A: Observable,
    psi: StateVector,
    phi: StateVector,
    alpha,
    outcome_set: OutcomeSet,
    degeneracy_tol: float | None = None,
) -> complex:
    """Quasiprobability that the outcome of A falls in the given set.

    Additive over disjoint sets; the full outcome set yields exactly 1 and
    the empty set 0.
    """
    a = as_alpha(alpha)
    ov = _transition_overlap(psi, phi)
    decomp = spectral_decompose(A, degeneracy_tol)
    if any(i >= decomp.n_outcomes for i in outcome_set.indices):
        raise ValueError("outcome index out of range for this decomposition")
    if not outcome_set.indices:
        return 0.0 + 0.0j
    return _alpha_mixed_value(decomp.projector_for(outcome_set.indices), psi, phi, a, ov)


def deterministic_reference_check(
    B: Observable,
    psi: StateVector,
    alpha,
    tol: float = 1e-10,
    degeneracy_tol: float | None = None,
) -> DeterministicReferenceReport:
    """Check that conditioning on a reference outcome pins that outcome.

    For each outcome b of B reachable from psi, the conditional
    distribution of B itself given the post-state in the b eigenspace must
    be the indicator of b.  Outcomes with vanishing weight in psi are
    skipped and reported.
    """
    a = as_alpha(alpha)
    decomp = spectral_decompose(B, degeneracy_tol)
    skipped = []
    max_dev = 0.0
    for i, p in enumerate(decomp.projectors):
        branch = p @ psi.amplitudes
        nrm = np.linalg.norm(branch)
        if nrm <= OVERLAP_FLOOR:
            skipped.append(i)
            continue
        post = StateVector(branch / nrm)
        ov = _transition_overlap(psi, post)
        for j, q in enumerate(decomp.projectors):
            val = _alpha_mixed_value(q, psi, post, a, ov)
            target = 1.0 if i == j else 0.0
            max_dev = max(max_dev, abs(val - target))
    return DeterministicReferenceReport(
        max_deviation=float(max_dev), tolerance=tol, skipped_outcomes=tuple(skipped)
    )
