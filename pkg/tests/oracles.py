"""Naive reference implementations used as independent test oracles.

Everything here is written with explicit Python loops over matrix entries,
deliberately avoiding the vectorized paths under test.  Keep dimensions
small (d <= 4 single system, 2x2 bipartite).
"""

import numpy as np


def mat_mul(A, B):
    n = len(A)
    out = [[0.0 + 0.0j for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = 0.0 + 0.0j
            for k in range(n):
                acc += complex(A[i][k]) * complex(B[k][j])
            out[i][j] = acc
    return out


def sandwich(phi, M, psi):
    """<phi|M|psi> by double loop."""
    acc = 0.0 + 0.0j
    for i in range(len(phi)):
        for j in range(len(psi)):
            acc += np.conj(complex(phi[i])) * complex(M[i][j]) * complex(psi[j])
    return acc


def overlap(phi, psi):
    acc = 0.0 + 0.0j
    for i in range(len(phi)):
        acc += np.conj(complex(phi[i])) * complex(psi[i])
    return acc


def alpha_mix(X, Y, a):
    n = len(X)
    xy = mat_mul(X, Y)
    yx = mat_mul(Y, X)
    return [[a * xy[i][j] + (1.0 - a) * yx[i][j] for j in range(n)] for i in range(n)]


def conditional_values(projectors, psi, phi, a):
    """One alpha-mixed projector value per outcome."""
    ov = overlap(phi, psi)
    out = []
    for P in projectors:
        fwd = sandwich(phi, P, psi) / ov
        rev = sandwich(psi, P, phi) / np.conj(ov)
        out.append(a * fwd + (1.0 - a) * rev)
    return out


def joint_values(projs_b, projs_a, psi, a):
    """Row-major (b, a) table of <psi| a Pb Pa + (1-a) Pa Pb |psi>."""
    out = []
    for Pb in projs_b:
        for Pa in projs_a:
            out.append(sandwich(psi, alpha_mix(Pb, Pa, a), psi))
    return out


def joint_values_mixed(projs_b, projs_a, rho, a):
    """Same table evaluated as a trace against a density matrix."""
    n = len(rho)
    out = []
    for Pb in projs_b:
        for Pa in projs_a:
            M = alpha_mix(Pb, Pa, a)
            acc = 0.0 + 0.0j
            for i in range(n):
                for j in range(n):
                    acc += complex(rho[i][j]) * complex(M[j][i])
            out.append(acc)
    return out


def kron_loops(A, B):
    n1, n2 = len(A), len(B)
    n = n1 * n2
    out = [[0.0 + 0.0j for _ in range(n)] for _ in range(n)]
    for i1 in range(n1):
        for j1 in range(n1):
            for i2 in range(n2):
                for j2 in range(n2):
                    out[i1 * n2 + i2][j1 * n2 + j2] = complex(A[i1][j1]) * complex(B[i2][j2])
    return out


def bipartite_joint_values(projs_a, projs_b, psi, a, d1, d2):
    """(x1, x2, ia, ib) table of the cell-referenced bipartite joint."""
    out = {}
    for x1 in range(d1):
        for x2 in range(d2):
            cell = [[0.0 + 0.0j] * (d1 * d2) for _ in range(d1 * d2)]
            flat = x1 * d2 + x2
            cell[flat][flat] = 1.0 + 0.0j
            for ia, Pa in enumerate(projs_a):
                for ib, Pb in enumerate(projs_b):
                    lifted = kron_loops(Pa, Pb)
                    out[(x1, x2, ia, ib)] = sandwich(psi, alpha_mix(cell, lifted, a), psi)
    return out


def bipartite_alt_values(projs_a, projs_b, psi, a1, a2, d1, d2):
    """(x1, x2, ia, ib) table of the per-particle parameterized joint."""
    out = {}
    for x1 in range(d1):
        cell1 = [[0.0 + 0.0j] * d1 for _ in range(d1)]
        cell1[x1][x1] = 1.0 + 0.0j
        for x2 in range(d2):
            cell2 = [[0.0 + 0.0j] * d2 for _ in range(d2)]
            cell2[x2][x2] = 1.0 + 0.0j
            for ia, Pa in enumerate(projs_a):
                g1 = alpha_mix(cell1, Pa, a1)
                for ib, Pb in enumerate(projs_b):
                    g2 = alpha_mix(cell2, Pb, a2)
                    out[(x1, x2, ia, ib)] = sandwich(psi, kron_loops(g1, g2), psi)
    return out


def hermitian_with_known_projectors(rng, dim):
    """Random Hermitian built from an explicit eigenbasis.

    Returns (matrix, ascending eigenvalues, rank-1 projectors) so oracles
    need no eigensolver of their own.
    """
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    evals = np.sort(rng.uniform(-3.0, 3.0, size=dim))
    while np.min(np.diff(evals)) < 0.3:
        evals = np.sort(rng.uniform(-3.0, 3.0, size=dim))
    projectors = [np.outer(q[:, k], q[:, k].conj()) for k in range(dim)]
    matrix = sum(e * p for e, p in zip(evals, projectors))
    return matrix, evals, projectors
