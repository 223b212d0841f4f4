"""Independent reference computations.

Scalar pure-Python versions written straight from the defining formulas,
sharing no code with the package's array kernels.
"""
import cmath
import math

import numpy as np


def lambda_oracle(cond, P, target):
    """Interference coefficients by explicit loops; ``P[row][col] = P(row | col)``."""
    out = []
    for row in range(2):
        classical = 0.0
        prod = 1.0
        for col in range(2):
            classical += cond[col] * P[row][col]
            prod *= cond[col] * P[row][col]
        out.append((target[row] - classical) / (2.0 * math.sqrt(prod)))
    return out


def amplitude_oracle(cond, P, theta1):
    thetas = (theta1, theta1 + math.pi)
    return [
        math.sqrt(cond[0] * P[row][0]) + cmath.exp(1j * thetas[row]) * math.sqrt(cond[1] * P[row][1])
        for row in range(2)
    ]


def inner(u, v):
    """``sum conj(u_i) v_i``."""
    return sum(x.conjugate() * y for x, y in zip(u, v))


def born_oracle(psi, P):
    """``(|psi_beta|^2, |<psi, e_alpha>|^2)`` with the conjugate basis built by hand."""
    e1 = [math.sqrt(P[0][0]), math.sqrt(P[1][0])]
    e2 = [math.sqrt(P[0][1]), -math.sqrt(P[1][1])]
    target = [abs(z) ** 2 for z in psi]
    cond = [abs(inner(e, psi)) ** 2 for e in (e1, e2)]
    return target, cond


def phase_grid_oracle(u, v, steps=10_000):
    """Brute-force ``min over gamma, kind`` of ``||exp(i gamma) u - w||``.

    ``w`` is ``v`` (kind 0) or ``conj(v)`` (kind 1). Works on batches:
    ``u`` and ``v`` have shape ``(n, 2)``. Returns ``(distance, gamma, kind)``
    arrays.
    """
    u = np.asarray(u)[:, None, :]
    v = np.asarray(v)
    grid = 2.0 * np.pi * np.arange(steps) / steps
    rot = np.exp(1j * grid)[None, :, None] * u
    best = []
    for k, w in enumerate((v, np.conj(v))):
        dist = np.linalg.norm(rot - w[:, None, :], axis=-1)
        idx = np.argmin(dist, axis=1)
        best.append((dist[np.arange(len(v)), idx], grid[idx], np.full(len(v), k)))
    (d0, g0, k0), (d1, g1, k1) = best
    pick = d1 < d0
    return np.where(pick, d1, d0), np.where(pick, g1, g0), np.where(pick, k1, k0)


def circular_distance(a, b):
    d = np.mod(np.asarray(a) - np.asarray(b), 2.0 * np.pi)
    return np.minimum(d, 2.0 * np.pi - d)
