"""Runtime identity suite over randomized inputs.

Each named identity is evaluated on freshly drawn random states,
observables, and complex parameters; the report carries the maximum
observed deviation against a fixed tolerance.  The suite backs the
``verify`` command and is also exercised directly by the tests.
"""

from __future__ import annotations

import numpy as np

from .alpha import alpha_product
from .bohm import BohmConfig, Grid1D, WaveFunction, ensemble_average, local_value
from .hilbert import Observable, StateVector, spectral_decompose
from .quasiprob import (
    OutcomeSet,
    born_probabilities,
    check_functional_conditions,
    commutator_asymmetry,
    conditional_qp,
    joint_qp,
    marginal_qp,
    qp_of_set,
)

TOLERANCES = {
    "qp-normalization": 1e-12,
    "qp-additivity": 1e-12,
    "joint-swap-asymmetry": 1e-10,
    "born-marginal": 1e-10,
    "alpha-independent-average": 1e-8,
    "product-endpoints": 1e-12,
    "product-jordan": 1e-12,
    "product-real-imag-split": 1e-12,
    "product-anticommutator-form": 1e-12,
    "product-symmetrized-sum": 1e-12,
    "product-commuting": 1e-12,
    "functional-additivity": 1e-10,
    "functional-boundary": 1e-10,
}

MIN_OVERLAP = 0.05


def random_state(rng: np.random.Generator, dim: int) -> StateVector:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(v / np.linalg.norm(v))


def random_hermitian(rng: np.random.Generator, dim: int) -> Observable:
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return Observable((m + m.conj().T) / 2.0)


def random_alpha(rng: np.random.Generator, scale: float = 1.5) -> complex:
    return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))


def random_transition_pair(rng: np.random.Generator, dim: int) -> tuple[StateVector, StateVector]:
    """Two random states with an overlap bounded away from zero."""
    while True:
        psi = random_state(rng, dim)
        phi = random_state(rng, dim)
        if abs(np.vdot(phi.amplitudes, psi.amplitudes)) > MIN_OVERLAP:
            return psi, phi


def run_identity_suite(
    dim: int = 4,
    trials: int = 50,
    seed: int = 0,
    perturb: float = 0.0,
    grid_points: int = 64,
) -> dict:
    """Evaluate every named identity; returns a report dictionary.

    ``perturb`` injects an artificial offset into the computed marginal
    before the Born comparison, for exercising the failure path.
    """
    if dim < 3:
        raise ValueError("dim must be at least 3")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    dev = {name: 0.0 for name in TOLERANCES}

    for _ in range(trials):
        a = random_alpha(rng)
        psi, phi = random_transition_pair(rng, dim)
        A = random_hermitian(rng, dim)
        B = random_hermitian(rng, dim)

        cond = conditional_qp(A, psi, phi, a)
        dev["qp-normalization"] = max(dev["qp-normalization"], abs(cond.values.sum() - 1.0))

        decomp = spectral_decompose(A)
        n = decomp.n_outcomes
        split = rng.integers(1, n) if n > 1 else 1
        perm = rng.permutation(n)
        s1 = OutcomeSet(tuple(int(i) for i in perm[:split]))
        s2 = OutcomeSet(tuple(int(i) for i in perm[split:]))
        union = OutcomeSet(tuple(int(i) for i in perm))
        lhs = qp_of_set(A, psi, phi, a, union)
        rhs = qp_of_set(A, psi, phi, a, s1) + qp_of_set(A, psi, phi, a, s2)
        dev["qp-additivity"] = max(dev["qp-additivity"], abs(lhs - rhs), abs(lhs - 1.0))

        asym = commutator_asymmetry(B, A, psi, a)
        fwd = joint_qp(B, A, psi, a)
        db = spectral_decompose(B)
        k = 0
        for pb in db.projectors:
            for pa in decomp.projectors:
                comm = pb @ pa - pa @ pb
                target = (2.0 * a - 1.0) * np.vdot(psi.amplitudes, comm @ psi.amplitudes)
                dev["joint-swap-asymmetry"] = max(dev["joint-swap-asymmetry"], abs(asym[k] - target))
                k += 1
        assert k == len(fwd.outcomes)

        marg = marginal_qp(B, A, psi, a)
        _, born = born_probabilities(A, psi)
        gap = np.abs(marg.values.real + perturb - born).max()
        dev["born-marginal"] = max(dev["born-marginal"], float(gap))

        report = check_functional_conditions(psi, phi, a, decomp)
        dev["functional-additivity"] = max(dev["functional-additivity"], report.additivity_deviation)
        dev["functional-boundary"] = max(dev["functional-boundary"], max(report.boundary_deviations))

        X = random_hermitian(rng, dim).matrix
        Y = random_hermitian(rng, dim).matrix
        comm = X @ Y - Y @ X
        dev["product-endpoints"] = max(
            dev["product-endpoints"],
            float(np.max(np.abs(alpha_product(X, Y, 1.0) - X @ Y))),
            float(np.max(np.abs(alpha_product(X, Y, 0.0) - Y @ X))),
        )
        dev["product-jordan"] = max(
            dev["product-jordan"],
            float(np.max(np.abs(alpha_product(X, Y, 0.5) - (X @ Y + Y @ X) / 2.0))),
        )
        s, t = a.real, a.imag
        dev["product-real-imag-split"] = max(
            dev["product-real-imag-split"],
            float(np.max(np.abs(alpha_product(X, Y, a) - (alpha_product(X, Y, s) + 1j * t * comm)))),
        )
        a_special = 0.5 * (1.0 - 1j)
        anti = X @ Y + Y @ X
        dev["product-anticommutator-form"] = max(
            dev["product-anticommutator-form"],
            float(np.max(np.abs(alpha_product(X, Y, a_special) - (0.5 * anti + comm / 2j)))),
        )
        dev["product-symmetrized-sum"] = max(
            dev["product-symmetrized-sum"],
            float(np.max(np.abs(alpha_product(X, Y, a) + alpha_product(Y, X, a) - anti))),
        )
        diag1 = np.diag(rng.standard_normal(dim)).astype(complex)
        diag2 = np.diag(rng.standard_normal(dim)).astype(complex)
        dev["product-commuting"] = max(
            dev["product-commuting"],
            float(np.max(np.abs(alpha_product(diag1, diag2, a) - diag1 @ diag2))),
        )

    grid = Grid1D(n_points=grid_points, x_min=-8.0, x_max=8.0)
    cfg = BohmConfig()
    packet = WaveFunction.gaussian(grid, x0=0.0, sigma0=2.0)
    A_grid = random_hermitian(rng, grid_points)
    target = np.vdot(
        packet.to_state_vector().amplitudes, A_grid.matrix @ packet.to_state_vector().amplitudes
    )
    for _ in range(10):
        field = local_value(A_grid, packet, random_alpha(rng))
        avg = ensemble_average(field, packet)
        dev["alpha-independent-average"] = max(dev["alpha-independent-average"], abs(avg - target))

    identities = {
        name: {
            "max_deviation": float(dev[name]),
            "tolerance": TOLERANCES[name],
            "passed": bool(dev[name] <= TOLERANCES[name]),
        }
        for name in TOLERANCES
    }
    return {
        "dim": dim,
        "trials": trials,
        "seed": seed,
        "perturb": perturb,
        "identities": identities,
        "all_passed": all(entry["passed"] for entry in identities.values()),
    }
