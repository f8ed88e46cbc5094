"""Aberth-Ehrlich simultaneous root iteration.

Works on a batch of polynomials at once (numpy, complex128), which is what the
Monte Carlo zero sampler needs; :func:`polish_roots` refines single roots in
mpmath when double precision is not enough.
"""

from __future__ import annotations

import numpy as np
import mpmath

from .errors import RootFindingFailure

__all__ = ["aberth", "polish_roots"]


def _initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    # coeffs: (B, n+1), ascending degree, leading coefficient nonzero
    n = coeffs.shape[1] - 1
    lead = coeffs[:, -1:]
    ratios = np.abs(coeffs[:, :-1] / lead)
    # Fujiwara-style bound on root moduli
    k = np.arange(n, 0, -1)
    bound = 2.0 * np.max(ratios ** (1.0 / k), axis=1)
    bound = np.where(bound > 0, bound, 1.0)
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    return bound[:, None] * np.exp(1j * angles)[None, :]


def aberth(coeffs, *, tol: float = 1e-12, max_iter: int = 200) -> np.ndarray:
    """Roots of each row of ``coeffs`` (ascending degree, shape (B, n+1) or (n+1,)).

    Converged when the largest update is below ``tol`` times the root scale.
    Raises :class:`RootFindingFailure` if any polynomial misses that within
    ``max_iter`` sweeps.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    single = c.ndim == 1
    if single:
        c = c[None, :]
    n = c.shape[1] - 1
    if n < 1:
        z = np.empty((c.shape[0], 0), dtype=np.complex128)
        return z[0] if single else z
    if np.any(c[:, -1] == 0):
        raise ValueError("leading coefficient must be nonzero")
    if n == 1:
        z = (-c[:, 0] / c[:, 1])[:, None]
        return z[0] if single else z
    dc = c[:, 1:] * np.arange(1, n + 1)
    z = _initial_guesses(c)
    active = np.ones(c.shape[0], dtype=bool)
    eye = np.eye(n, dtype=bool)
    for _ in range(max_iter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        zz = z[idx]
        p = np.zeros_like(zz)
        dp = np.zeros_like(zz)
        for j in range(n, -1, -1):
            p = p * zz + c[idx, j][:, None]
        for j in range(n - 1, -1, -1):
            dp = dp * zz + dc[idx, j][:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = zz[:, :, None] - zz[:, None, :]
            diff[:, eye] = 1.0
            inv = 1.0 / diff
            inv[:, eye] = 0.0
            repulse = inv.sum(axis=2)
            step = ratio / (1.0 - ratio * repulse)
        step = np.where(np.isfinite(step), step, 0.0)
        step = np.where(p == 0, 0.0, step)
        zz = zz - step
        z[idx] = zz
        scale = np.maximum(1.0, np.abs(zz).max(axis=1))
        done = np.abs(step).max(axis=1) < tol * scale
        active[idx[done]] = False
    if active.any():
        raise RootFindingFailure(
            f"{int(active.sum())} polynomial(s) not converged after {max_iter} iterations"
        )
    return z[0] if single else z


def polish_roots(coeffs, roots, *, dps: int = 60, steps: int = 40):
    """Newton-polish each root in mpmath at ``dps`` digits.

    ``coeffs`` are ascending and may be exact (Fraction/int); returns mpc roots.
    """
    with mpmath.workdps(dps):
        cs = [mpmath.mpf(a.numerator) / a.denominator if hasattr(a, "denominator") else mpmath.mpmathify(a)
              for a in coeffs]
        rev = cs[::-1]
        out = []
        for r in roots:
            z = mpmath.mpc(complex(r))
            for _ in range(steps):
                p, dp = mpmath.polyval(rev, z, derivative=True)
                if dp == 0:
                    break
                nz = z - p / dp
                if abs(nz - z) <= mpmath.mpf(10) ** (-dps + 5) * max(1, abs(nz)):
                    z = nz
                    break
                z = nz
            out.append(z)
        return out
