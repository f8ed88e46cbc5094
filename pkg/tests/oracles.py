"""Brute-force Haar averages over eigenangles, used as independent oracles.

The Weyl density prod |e^{i a} - e^{i b}|^2 / N! times any trigonometric
polynomial is again a trigonometric polynomial, so averaging over a uniform
grid on the torus with more points than its degree is exact up to rounding.
"""

import itertools
import math

import numpy as np


def weyl_average(N: int, fn, points: int = 24, stagger: float = 0.0) -> float:
    """``stagger`` shifts variable j by j * stagger grid steps (keeps log singularities off the grid)."""
    theta = 2 * np.pi * np.arange(points) / points
    step = 2 * np.pi / points
    grids = np.meshgrid(*[theta + j * stagger * step for j in range(N)], indexing="ij")
    z = np.stack([np.exp(1j * g.ravel()) for g in grids], axis=1)  # (P^N, N)
    density = np.ones(z.shape[0])
    for a, b in itertools.combinations(range(N), 2):
        density *= np.abs(z[:, a] - z[:, b]) ** 2
    return float(np.sum(density * fn(z)) / (points**N * math.factorial(N)))


def lambda_prime(z: np.ndarray, x: complex) -> np.ndarray:
    """d/ds prod_j (1 - s conj(z_j)) at s = x, for rows of eigenvalues z."""
    w = np.conj(z)
    N = z.shape[1]
    total = np.zeros(z.shape[0], dtype=complex)
    for j in range(N):
        term = -w[:, j]
        for l in range(N):
            if l != j:
                term = term * (1 - x * w[:, l])
        total += term
    return total


def lambda_value(z: np.ndarray, x: complex) -> np.ndarray:
    return np.prod(1 - x * np.conj(z), axis=1)
