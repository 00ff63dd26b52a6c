"""Hidden-state models, their classification, and two-particle locality.

A model assigns each (observable, preparation) pair a joint distribution
over (hidden label, outcome); the values may be complex.  From the joint
follow the hidden-state marginal (the distribution a preparation induces
over hidden labels), the two conditionals relating hidden labels and
outcomes, and the requirement that summing out the hidden label reproduce
the observed outcome statistics.

The classification asks two independence questions: does the hidden-state
marginal depend on which observable is measured, and do the conditionals
depend on the preparation?  A guided-trajectory model built on the
alpha-mixed quasiprobability answers no to the first and yes to the
second; a deterministic classical toy answers no to both.

The bipartite operations cover two particles with one observable each:
position-referenced joint quasiprobabilities, position-conditioned
correlations, a two-parameter variant that keeps product states exactly
uncorrelated, and the overlap witness for distinct preparations sharing
hidden labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from .alpha import alpha_product, as_alpha
from .errors import DimMismatch, ZeroDensityPoint
from .hilbert import DensityOperator, Observable, StateVector, expectation, spectral_decompose
from .quasiprob import QP_SUM_TOL, born_probabilities

DENOM_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class OntModel:
    """A hidden-state model over a finite label set.

    ``joint_fn(lam, a, A, prep)`` must be a pure function returning the
    (possibly complex) joint quasiprobability of hidden label ``lam`` and
    outcome ``a`` when ``A`` is measured on preparation ``prep``.
    ``outcomes_fn(A)`` lists the outcomes of ``A``; ``observed_fn(A, prep)``
    returns the outcome distribution the model is required to reproduce
    (defaults to the model's own outcome marginal).
    """

    ontic_labels: tuple
    outcomes_fn: Callable[[Any], tuple]
    joint_fn: Callable[[Any, Any, Any, Any], complex]
    observed_fn: Callable[[Any, Any], np.ndarray] | None = None
    description: str = ""


@dataclass(frozen=True)
class IndicatorFunctions:
    """Conditionals of a hidden-state model; NaN entries are undefined."""

    outcome_given_label: np.ndarray
    label_given_outcome: np.ndarray
    outcome_given_label_defined: np.ndarray
    label_given_outcome_defined: np.ndarray


@dataclass(frozen=True)
class SynlogicalityReport:
    """Observable/preparation dependence classification with evidence."""

    observable_synlogical: bool
    observable_deviation: float
    preparation_synlogical: bool
    preparation_deviation: float
    preparation_witness: str | None
    reproduction_ok: bool
    reproduction_deviation: float
    psi_epistemic_witness: tuple[int, int, float] | None

    def to_json_dict(self) -> dict:
        wit = self.psi_epistemic_witness
        return {
            "observable_synlogical": self.observable_synlogical,
            "observable_deviation": self.observable_deviation,
            "preparation_synlogical": self.preparation_synlogical,
            "preparation_deviation": self.preparation_deviation,
            "preparation_witness": self.preparation_witness,
            "reproduction_ok": self.reproduction_ok,
            "reproduction_deviation": self.reproduction_deviation,
            "psi_epistemic_witness": None
            if wit is None
            else {"preparations": [wit[0], wit[1]], "overlap": wit[2]},
        }


def joint_table(model: OntModel, A, prep) -> tuple[tuple, np.ndarray]:
    """Outcome labels and the (n_labels, n_outcomes) joint table; checks K2."""
    outcomes = tuple(model.outcomes_fn(A))
    table = np.empty((len(model.ontic_labels), len(outcomes)), dtype=complex)
    for i, lam in enumerate(model.ontic_labels):
        for j, a in enumerate(outcomes):
            table[i, j] = model.joint_fn(lam, a, A, prep)
    total = table.sum()
    if abs(total - 1.0) > QP_SUM_TOL:
        raise ValueError(f"model joint sums to {total}, not 1 within {QP_SUM_TOL}")
    return outcomes, table


def epistemic_state(model: OntModel, A, prep) -> np.ndarray:
    """Distribution over hidden labels induced by the preparation."""
    _, table = joint_table(model, A, prep)
    return table.sum(axis=1)


def indicator_functions(model: OntModel, A, prep) -> IndicatorFunctions:
    """Both conditionals of the joint; entries with tiny denominators are NaN."""
    _, table = joint_table(model, A, prep)
    lam_marginal = table.sum(axis=1)
    out_marginal = table.sum(axis=0)

    lam_ok = np.abs(lam_marginal) > DENOM_FLOOR
    out_ok = np.abs(out_marginal) > DENOM_FLOOR

    a_given_lam = np.full_like(table, np.nan + 1j * np.nan)
    a_given_lam[lam_ok, :] = table[lam_ok, :] / lam_marginal[lam_ok, None]
    lam_given_a = np.full_like(table, np.nan + 1j * np.nan)
    lam_given_a[:, out_ok] = table[:, out_ok] / out_marginal[None, out_ok]

    return IndicatorFunctions(
        outcome_given_label=a_given_lam,
        label_given_outcome=lam_given_a,
        outcome_given_label_defined=np.broadcast_to(lam_ok[:, None], table.shape).copy(),
        label_given_outcome_defined=np.broadcast_to(out_ok[None, :], table.shape).copy(),
    )


def bayes_check(model: OntModel, A, prep) -> float:
    """Max deviation from Bayes' formula over jointly defined entries."""
    _, table = joint_table(model, A, prep)
    ind = indicator_functions(model, A, prep)
    lam_marginal = table.sum(axis=1)
    out_marginal = table.sum(axis=0)
    both = ind.outcome_given_label_defined & ind.label_given_outcome_defined
    if not both.any():
        return 0.0
    recomposed = (
        ind.outcome_given_label * lam_marginal[:, None] / np.where(both, out_marginal[None, :], 1.0)
    )
    dev = np.abs(ind.label_given_outcome - recomposed)
    return float(np.max(dev[both]))


def reproduction_check(model: OntModel, A, prep, born: np.ndarray) -> float:
    """Max gap between the model's outcome marginal and the target distribution."""
    _, table = joint_table(model, A, prep)
    return float(np.max(np.abs(table.sum(axis=0) - np.asarray(born))))


def classify_synlogicality(
    model: OntModel,
    observables: Sequence,
    preparations: Sequence,
    tol: float = 1e-10,
) -> SynlogicalityReport:
    """Probe the model on the given observables and preparations.

    The observable question compares hidden-label marginals across
    observables at fixed preparation; the preparation question compares
    the outcome-given-label conditionals across preparations at fixed
    observable, restricted to entries defined on both sides.  The
    preparation verdict is an existential witness over the probes, not a
    universal claim.
    """
    if len(observables) < 2 or len(preparations) < 2:
        raise ValueError("need at least two observables and two preparations")

    obs_dev = 0.0
    for prep in preparations:
        states = [epistemic_state(model, A, prep) for A in observables]
        for i in range(len(states)):
            for j in range(i + 1, len(states)):
                obs_dev = max(obs_dev, float(np.max(np.abs(states[i] - states[j]))))

    prep_dev = 0.0
    witness = None
    for ai, A in enumerate(observables):
        tables = [indicator_functions(model, A, prep) for prep in preparations]
        for i in range(len(tables)):
            for j in range(i + 1, len(tables)):
                both = (
                    tables[i].outcome_given_label_defined
                    & tables[j].outcome_given_label_defined
                )
                if not both.any():
                    continue
                diff = np.abs(
                    tables[i].outcome_given_label - tables[j].outcome_given_label
                )
                local = float(np.max(diff[both]))
                if local > prep_dev:
                    prep_dev = local
                    lam_idx, a_idx = np.unravel_index(
                        np.argmax(np.where(both, diff, -1.0)), diff.shape
                    )
                    witness = (
                        f"observable #{ai}, preparations #{i}/#{j}, "
                        f"label index {lam_idx}, outcome index {a_idx}: "
                        f"indicator difference {local:.3e}"
                    )

    rep_dev = 0.0
    for A in observables:
        for prep in preparations:
            if model.observed_fn is not None:
                target = np.asarray(model.observed_fn(A, prep))
            else:
                _, table = joint_table(model, A, prep)
                target = table.sum(axis=0)
            rep_dev = max(rep_dev, reproduction_check(model, A, prep, target))

    epi = [epistemic_state(model, observables[0], prep) for prep in preparations]
    best = None
    for i in range(len(epi)):
        for j in range(i + 1, len(epi)):
            overlap = float(np.max(np.abs(epi[i]) * np.abs(epi[j])))
            if best is None or overlap > best[2]:
                best = (i, j, overlap)

    return SynlogicalityReport(
        observable_synlogical=obs_dev > tol,
        observable_deviation=obs_dev,
        preparation_synlogical=prep_dev > 1e-3,
        preparation_deviation=prep_dev,
        preparation_witness=witness,
        reproduction_ok=rep_dev <= tol,
        reproduction_deviation=rep_dev,
        psi_epistemic_witness=best,
    )


# ---------------------------------------------------------------------------
# Built-in model instances


def bohmian_grid_model(dim: int, alpha) -> OntModel:
    """Position-referenced quasiprobability model on a dim-point basis.

    Hidden labels are the basis (cell) indices; the joint of label x and
    outcome a is the alpha product of the cell projector with the spectral
    projector of a, evaluated in the preparation.  Preparations are
    StateVector instances; observables are Observable instances.
    """
    a_param = as_alpha(alpha)
    cache: dict[int, Any] = {}

    def decomp_of(A: Observable):
        key = id(A)
        if key not in cache:
            cache[key] = spectral_decompose(A)
        return cache[key]

    def outcomes_fn(A: Observable) -> tuple:
        return tuple(decomp_of(A).eigenvalues.tolist())

    def joint_fn(lam, a, A: Observable, psi: StateVector) -> complex:
        decomp = decomp_of(A)
        j = int(np.argmin(np.abs(decomp.eigenvalues - a)))
        image = decomp.projectors[j] @ psi.amplitudes
        amp = psi.amplitudes[lam]
        return complex(a_param * np.conj(amp) * image[lam] + (1.0 - a_param) * np.conj(image[lam]) * amp)

    def observed_fn(A: Observable, psi: StateVector) -> np.ndarray:
        _, probs = born_probabilities(A, psi)
        return probs

    return OntModel(
        ontic_labels=tuple(range(dim)),
        outcomes_fn=outcomes_fn,
        joint_fn=joint_fn,
        observed_fn=observed_fn,
        description=f"position-referenced quasiprobability model, dim={dim}, alpha={a_param}",
    )


def classical_toy_model() -> OntModel:
    """Deterministic classical model: each hidden label fixes every outcome.

    Observables are value maps (tuples assigning an outcome to each label),
    preparations are probability vectors over the three labels.
    """
    labels = (0, 1, 2)

    def outcomes_fn(value_map: tuple) -> tuple:
        return tuple(sorted(set(value_map)))

    def joint_fn(lam, a, value_map: tuple, prior) -> complex:
        prior = np.asarray(prior, dtype=float)
        return complex(prior[lam] if value_map[lam] == a else 0.0)

    return OntModel(
        ontic_labels=labels,
        outcomes_fn=outcomes_fn,
        joint_fn=joint_fn,
        observed_fn=None,
        description="deterministic classical toy over three labels",
    )


CLASSICAL_TOY_OBSERVABLES = ((0, 1, 0), (0, 1, 2))
CLASSICAL_TOY_PREPARATIONS = ((0.5, 0.3, 0.2), (0.1, 0.6, 0.3))


def os_toy_model() -> OntModel:
    """Toy whose hidden-label marginal depends on the measured observable."""
    labels = (0, 1)
    label_weights = {"first": (0.7, 0.3), "second": (0.5, 0.5)}

    def outcomes_fn(name: str) -> tuple:
        return (0.0, 1.0)

    def joint_fn(lam, a, name: str, prep) -> complex:
        w = label_weights[name]
        return complex(w[lam] if float(lam) == a else 0.0)

    return OntModel(
        ontic_labels=labels,
        outcomes_fn=outcomes_fn,
        joint_fn=joint_fn,
        observed_fn=None,
        description="observable-dependent hidden-label marginal toy",
    )


OS_TOY_OBSERVABLES = ("first", "second")
OS_TOY_PREPARATIONS = ("p0", "p1")


# ---------------------------------------------------------------------------
# Two-particle operations


@dataclass(frozen=True, eq=False)
class BipartiteQP:
    """Quasiprobability over (cell 1, cell 2, outcome of A, outcome of B)."""

    x1_labels: tuple[int, ...]
    x2_labels: tuple[int, ...]
    a_outcomes: tuple[float, ...]
    b_outcomes: tuple[float, ...]
    values: np.ndarray
    alphas: tuple[complex, ...]

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        shape = (len(self.x1_labels), len(self.x2_labels), len(self.a_outcomes), len(self.b_outcomes))
        if v.shape != shape:
            raise ValueError(f"values shape {v.shape} does not match labels {shape}")
        total = v.sum()
        if abs(total - 1.0) > QP_SUM_TOL:
            raise ValueError(f"bipartite joint sums to {total}, not 1")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def _check_bipartite(A: Observable, B: Observable, state) -> tuple[int, int]:
    d1, d2 = A.dim, B.dim
    if state.dim != d1 * d2:
        raise DimMismatch(f"state dim {state.dim} is not {d1}*{d2}")
    return d1, d2


def two_particle_joint_qp(
    A: Observable,
    B: Observable,
    state: StateVector | DensityOperator,
    alpha,
) -> BipartiteQP:
    """Position-referenced joint for A on particle 1 and B on particle 2.

    A and B are lifted to A x I and I x B; the product of their spectral
    projectors is alpha-multiplied with the composite cell projector.
    """
    a_param = as_alpha(alpha)
    d1, d2 = _check_bipartite(A, B, state)
    da = spectral_decompose(A)
    db = spectral_decompose(B)
    n = d1 * d2
    values = np.empty((d1, d2, da.n_outcomes, db.n_outcomes), dtype=complex)
    pure = isinstance(state, StateVector)
    for ia, pa in enumerate(da.projectors):
        for ib, pb in enumerate(db.projectors):
            m = np.kron(pa, pb)
            if pure:
                psi = state.amplitudes
                image = m @ psi
                diag = a_param * np.conj(psi) * image + (1.0 - a_param) * np.conj(image) * psi
            else:
                diag = a_param * np.diag(m @ state.matrix) + (1.0 - a_param) * np.diag(state.matrix @ m)
            values[:, :, ia, ib] = diag.reshape(d1, d2)
    return BipartiteQP(
        x1_labels=tuple(range(d1)),
        x2_labels=tuple(range(d2)),
        a_outcomes=tuple(da.eigenvalues.tolist()),
        b_outcomes=tuple(db.eigenvalues.tolist()),
        values=values,
        alphas=(a_param,),
    )


def alt_joint_qp(
    A: Observable,
    B: Observable,
    state: StateVector | DensityOperator,
    alpha1,
    alpha2,
) -> BipartiteQP:
    """Per-particle-parameterized joint that is exactly local on products.

    Each particle carries its own parameter: the composite operator is the
    product of (cell 1 projector alpha1-multiplied with A's projector) and
    (cell 2 projector alpha2-multiplied with B's projector).  For a product
    preparation this factorizes into the two single-particle joints for
    every choice of the parameters.
    """
    a1 = as_alpha(alpha1)
    a2 = as_alpha(alpha2)
    d1, d2 = _check_bipartite(A, B, state)
    da = spectral_decompose(A)
    db = spectral_decompose(B)
    cells1 = [np.zeros((d1, d1), dtype=complex) for _ in range(d1)]
    for x in range(d1):
        cells1[x][x, x] = 1.0
    cells2 = [np.zeros((d2, d2), dtype=complex) for _ in range(d2)]
    for x in range(d2):
        cells2[x][x, x] = 1.0

    values = np.empty((d1, d2, da.n_outcomes, db.n_outcomes), dtype=complex)
    for x1 in range(d1):
        for ia, pa in enumerate(da.projectors):
            g1 = alpha_product(cells1[x1], pa, a1)
            for x2 in range(d2):
                for ib, pb in enumerate(db.projectors):
                    g2 = alpha_product(cells2[x2], pb, a2)
                    values[x1, x2, ia, ib] = expectation(state, np.kron(g1, g2))
    return BipartiteQP(
        x1_labels=tuple(range(d1)),
        x2_labels=tuple(range(d2)),
        a_outcomes=tuple(da.eigenvalues.tolist()),
        b_outcomes=tuple(db.eigenvalues.tolist()),
        values=values,
        alphas=(a1, a2),
    )


def correlation(
    A: Observable,
    B: Observable,
    state: StateVector | DensityOperator,
    alpha,
    x: tuple[int, int],
) -> complex:
    """Cell-conditioned outcome correlation sum_ab a*b*p(a,b | cells, state)."""
    d1, d2 = _check_bipartite(A, B, state)
    x1, x2 = int(x[0]), int(x[1])
    flat = x1 * d2 + x2
    if isinstance(state, StateVector):
        weight = float(np.abs(state.amplitudes[flat]) ** 2)
    else:
        weight = float(state.matrix[flat, flat].real)
    if weight <= DENOM_FLOOR:
        raise ZeroDensityPoint(f"cell ({x1}, {x2}) has position density {weight:.3e}")
    joint = two_particle_joint_qp(A, B, state, alpha)
    a_vals = np.asarray(joint.a_outcomes)
    b_vals = np.asarray(joint.b_outcomes)
    block = joint.values[x1, x2]
    return complex(np.sum(a_vals[:, None] * b_vals[None, :] * block) / weight)


def psi_epistemic_witness(psi, phi) -> float:
    """Largest pointwise product of the two position densities.

    A positive value exhibits a hidden label reachable from both
    preparations.  Accepts StateVector or WaveFunction arguments that
    share one basis.
    """
    d1 = np.abs(np.asarray(psi.amplitudes)) ** 2
    d2 = np.abs(np.asarray(phi.amplitudes)) ** 2
    if d1.shape != d2.shape:
        raise DimMismatch("witness needs two states on the same basis")
    return float(np.max(d1 * d2))
