"""Haar-random unitaries and Monte Carlo estimates built on them.

Samples are drawn in fixed-size chunks.  Chunk i gets its own generator seeded
from splitmix64(seed + i * golden), so the set of samples depends only on
(seed, chunk_size, samples).  Per-chunk statistics are merged in chunk order,
which keeps estimates bit-identical for any number of workers.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .errors import SizeTooLarge, ValidationError
from .roots import aberth

__all__ = [
    "MAX_N",
    "splitmix64",
    "chunk_rng",
    "sample_haar",
    "charpoly_coefficients",
    "charpoly_and_derivative",
    "MCEstimate",
    "RadialHistogram",
    "mc_moment",
    "mc_log_moment",
    "mc_zero_radii",
]

MAX_N = 12
DEFAULT_CHUNK = 20_000
_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    x = (x + _GOLDEN) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng(splitmix64((seed + chunk * _GOLDEN) & _MASK))


def sample_haar(N: int, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar unitary (or a stack of ``size`` of them) via phase-corrected QR of a Ginibre matrix."""
    if N < 1:
        raise ValidationError("N must be at least 1")
    shape = (N, N) if size is None else (size, N, N)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    phase = d / np.abs(d)
    return q * phase[..., None, :]


def _check_size(N: int):
    if N > MAX_N:
        raise SizeTooLarge(f"N = {N} exceeds {MAX_N}; the power-sum route loses accuracy beyond that")


def charpoly_coefficients(X: np.ndarray) -> np.ndarray:
    """Ascending coefficients of Lambda_X(s) = det(I - s X^dagger), batched over leading axes.

    Power traces tr(X^j) go through Newton's identities to the elementary
    symmetric functions e_j of the eigenvalues; then a_j = (-1)^j conj(e_j).
    """
    X = np.asarray(X, dtype=np.complex128)
    N = X.shape[-1]
    _check_size(N)
    batch = X.shape[:-2]
    p = np.empty(batch + (N + 1,), dtype=np.complex128)
    power = X
    for j in range(1, N + 1):
        p[..., j] = np.trace(power, axis1=-2, axis2=-1)
        if j < N:
            power = power @ X
    e = np.zeros(batch + (N + 1,), dtype=np.complex128)
    e[..., 0] = 1
    for j in range(1, N + 1):
        acc = np.zeros(batch, dtype=np.complex128)
        for i in range(1, j + 1):
            acc += (-1) ** (i - 1) * e[..., j - i] * p[..., i]
        e[..., j] = acc / j
    signs = (-1.0) ** np.arange(N + 1)
    return signs * np.conj(e)


def _derivative_coefficients(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1] - 1
    return a[..., 1:] * np.arange(1, n + 1)


def _polyval(c: np.ndarray, x) -> np.ndarray:
    out = np.zeros(c.shape[:-1], dtype=np.complex128)
    for j in range(c.shape[-1] - 1, -1, -1):
        out = out * x + c[..., j]
    return out


def charpoly_and_derivative(X: np.ndarray, x: complex):
    """(Lambda_X(x), Lambda_X'(x)), evaluated from the coefficient vector."""
    a = charpoly_coefficients(X)
    return _polyval(a, x), _polyval(_derivative_coefficients(a), x)


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int
    chunk_size: int

    def to_dict(self) -> dict:
        return asdict(self)


def _chunk_sizes(samples: int, chunk_size: int) -> list[int]:
    full, rest = divmod(samples, chunk_size)
    return [chunk_size] * full + ([rest] if rest else [])


def _merge(stats):
    # Chan et al. pairwise update, applied in chunk order
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in stats:
        tot = n + nb
        delta = mb - mean
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    return n, mean, m2


def _run_chunks(fn, samples: int, seed: int, chunk_size: int, workers: int | None):
    sizes = _chunk_sizes(samples, chunk_size)
    jobs = [(i, s) for i, s in enumerate(sizes)]
    if workers is None:
        from .moments import default_workers

        workers = default_workers()
    if workers <= 1 or len(jobs) == 1:
        return [fn(chunk_rng(seed, i), s) for i, s in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(chunk_rng(seed, job[0]), job[1]), jobs))


def _estimate(values_fn, samples, seed, chunk_size, workers) -> MCEstimate:
    if samples < 2:
        raise ValidationError("need at least 2 samples")
    if chunk_size < 1:
        raise ValidationError("chunk_size must be positive")

    def chunk(rng, size):
        v = values_fn(rng, size)
        m = float(np.mean(v))
        return size, m, float(np.sum((v - m) ** 2))

    n, mean, m2 = _merge(_run_chunks(chunk, samples, seed, chunk_size, workers))
    std = math.sqrt(m2 / (n - 1)) if n > 1 else 0.0
    return MCEstimate(mean, std / math.sqrt(n), n, seed, chunk_size)


def mc_moment(N: int, k: float, x: complex, samples: int, seed: int = 0, *,
              chunk_size: int = DEFAULT_CHUNK, workers: int | None = None) -> MCEstimate:
    """Monte Carlo mean of |Lambda_X'(x)|^{2k} over Haar U(N)."""
    _check_size(N)

    def values(rng, size):
        _, d = charpoly_and_derivative(sample_haar(N, rng, size), x)
        return np.abs(d) ** (2 * k)

    return _estimate(values, samples, seed, chunk_size, workers)


def mc_log_moment(N: int, r: float, samples: int, seed: int = 0, *,
                  chunk_size: int = DEFAULT_CHUNK, workers: int | None = None) -> MCEstimate:
    """Monte Carlo mean of log|Lambda_X'(r)| over Haar U(N), 0 <= r < 1."""
    if not 0 <= r < 1:
        raise ValidationError("r must lie in [0, 1)")
    _check_size(N)

    def values(rng, size):
        _, d = charpoly_and_derivative(sample_haar(N, rng, size), r)
        return np.log(np.abs(d))

    return _estimate(values, samples, seed, chunk_size, workers)


@dataclass(frozen=True)
class RadialHistogram:
    """Moduli of the zeros of Lambda' binned on [0, 1].

    The top edge is widened by ``edge_slack`` so zeros that land on the unit
    circle up to rounding are still counted.
    """

    N: int
    edges: tuple[float, ...]
    counts: tuple[int, ...]
    total: int
    samples: int
    max_modulus: float
    seed: int
    chunk_size: int
    edge_slack: float = 1e-8

    def mean_count(self) -> list[float]:
        """Estimated E[#zeros with modulus <= u] at each upper bin edge."""
        return [c / self.samples for c in np.cumsum(self.counts).tolist()]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["u_lo", "u_hi", "count", "cum_fraction"])
        cum = 0
        for lo, hi, c in zip(self.edges[:-1], self.edges[1:], self.counts):
            cum += c
            w.writerow([repr(lo), repr(hi), c, repr(cum / self.total if self.total else 0.0)])
        return buf.getvalue()


def _derivative_zero_moduli(N: int, rng, size: int) -> np.ndarray:
    X = sample_haar(N, rng, size)
    if N == 2:
        lam = np.linalg.eigvals(X)
        return np.abs(lam.sum(axis=1) / 2)[:, None]
    d = _derivative_coefficients(charpoly_coefficients(X))
    return np.abs(aberth(d))


def mc_zero_radii(N: int, samples: int, seed: int = 0, bins: int = 100, *,
                  chunk_size: int = DEFAULT_CHUNK, workers: int | None = None) -> RadialHistogram:
    """Histogram of |z| over zeros z of Lambda_X' for Haar X in U(N)."""
    if N < 2:
        raise ValidationError("Lambda' has no zeros for N < 2")
    if bins < 1 or samples < 1:
        raise ValidationError("bins and samples must be positive")
    _check_size(N)
    edges = np.linspace(0.0, 1.0, bins + 1)
    slack = 1e-8
    search = edges.copy()
    search[-1] += slack

    def chunk(rng, size):
        mod = _derivative_zero_moduli(N, rng, size).ravel()
        counts, _ = np.histogram(mod, bins=search)
        return counts, float(mod.max())

    parts = _run_chunks(chunk, samples, seed, chunk_size, workers)
    counts = np.sum([p[0] for p in parts], axis=0)
    return RadialHistogram(
        N,
        tuple(edges.tolist()),
        tuple(int(c) for c in counts),
        int(counts.sum()),
        samples,
        max(p[1] for p in parts),
        seed,
        chunk_size,
        slack,
    )
