"""White-noise driven simulation of ``R(sigma) w = e`` and Welch estimation.

Noise comes from numpy's PCG64 bit generator with the ziggurat normal
transform (``Generator.standard_normal``), seeded by the 64-bit
``SimConfig.seed``; identical seeds give bit-identical trajectories.

Time layout: the recursion starts from zeros at ``t = 0 .. L - l - 1`` and
the first ``burn_in`` samples are discarded, so a trajectory starts at
``t = burn_in``.  Noise samples carry the time label ``t`` of the equation
``R(sigma) w(t) = e(t)`` they drive.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import signal

from .behavior import KernelRepresentation, TrajectoryWindow, apply_shift
from .errors import (GridMismatch, LeadingCoefficientSingular, NotScalar,
                     NotSquare, SegmentTooLong, UnstableKernel)
from .laurent import LaurentMatrix, LaurentPolynomial, ONE, ZERO
from .process import LtiProcessModel
from .spectral import (SpectralDensity, density_eval, determinant_roots,
                       frequency_grid)

__all__ = [
    "SimConfig", "Trajectory", "SpectrumEstimate", "SpectrumComparison",
    "stability_check", "simulate", "residual_noise", "welch_spectrum",
    "compare_spectrum", "proper_representation", "write_trajectory_csv",
    "read_trajectory_csv", "write_spectrum_csv",
]

STABILITY_MARGIN = 1e-9
DEFAULT_SEGMENT = 64


@dataclass(frozen=True)
class SimConfig:
    length: int
    burn_in: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("length must be at least 1")
        if self.burn_in < 0:
            raise ValueError("burn_in must be non-negative")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True, eq=False)
class Trajectory(TrajectoryWindow):
    """Floating point window with finite samples."""

    def __post_init__(self):
        object.__setattr__(self, "samples",
                           np.asarray(self.samples, dtype=float).reshape(len(self.samples), -1))
        super().__post_init__()
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("trajectory contains non-finite samples")


@dataclass(frozen=True)
class SpectrumEstimate:
    grid: np.ndarray
    values: np.ndarray  # (L,) real for scalar signals, (L, n, n) otherwise
    segment_count: int
    segment_length: int

    @property
    def is_scalar(self) -> bool:
        return self.values.ndim == 1


@dataclass(frozen=True)
class SpectrumComparison:
    mean_relative_error: float
    max_relative_error: float

    def report(self) -> str:
        return (f"mean_relative_error {self.mean_relative_error:.6g}\n"
                f"max_relative_error {self.max_relative_error:.6g}\n")


def stability_check(K: KernelRepresentation):
    """``(stable, roots)`` where stable means every root of ``det R`` has
    modulus below ``1 - 1e-9``."""
    roots = determinant_roots(K)
    stable = not roots.size or float(np.max(np.abs(roots))) < 1 - STABILITY_MARGIN
    return stable, roots


# -- equivalent representation with invertible leading coefficient ---------

def _left_null_vector(A: np.ndarray):
    """Non-zero ``v`` with ``v @ A == 0`` (exact for Fraction arrays)."""
    if A.dtype != object:
        u, s, vh = np.linalg.svd(A.T.astype(float))
        if s[-1] > 1e-12 * max(s[0], 1.0):
            return None
        return vh[-1]
    # Gauss-Jordan on A^T over the rationals
    M = [list(r) for r in A.T]
    rows, cols = len(M), len(M[0])
    pivots, r = [], 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(rows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    v = [Fraction(0)] * cols
    v[f] = Fraction(1)
    for i, c in enumerate(pivots):
        v[c] = -M[i][f]
    return np.array(v, dtype=object)


def proper_representation(R: LaurentMatrix):
    """Return ``(R2, U)`` with ``R2 = U R``, ``U`` unimodular and the highest
    coefficient matrix of ``R2`` invertible.

    Rows are aligned so each ends at exponent 0; while the aligned leading
    coefficient matrix is singular, the row with the widest span among those
    in a left null combination is replaced by that combination (its span
    strictly drops) and realigned.
    """
    n = R.rows
    exact = R.is_exact()
    rows = [list(R.row(i)) for i in range(n)]
    U = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]

    def align(i):
        hi = max(e.high for e in rows[i] if e)
        rows[i] = [e.shift(-hi) for e in rows[i]]
        U[i] = [e.shift(-hi) for e in U[i]]

    for i in range(n):
        if all(e.is_zero() for e in rows[i]):
            raise LeadingCoefficientSingular("kernel has a zero row")
        align(i)
    for _ in range(sum(max(e.span for e in r if e) + 1 for r in rows) + n):
        lead = np.array([[e.coeff(0) for e in r] for r in rows], dtype=object)
        if not exact:
            lead = lead.astype(float)
        v = _left_null_vector(lead)
        if v is None:
            return LaurentMatrix(rows), LaurentMatrix(U)
        involved = [i for i in range(n) if v[i] != 0]
        k = min(involved, key=lambda i: min(e.low for e in rows[i] if e))
        new_row = [ZERO] * len(rows[0])
        new_u = [ZERO] * n
        for i in involved:
            new_row = [a + b * v[i] for a, b in zip(new_row, rows[i])]
            new_u = [a + b * v[i] for a, b in zip(new_u, U[i])]
        if not exact:
            new_row = [_chop(e) for e in new_row]
        if all(e.is_zero() for e in new_row):
            break
        rows[k], U[k] = new_row, new_u
        align(k)
    raise LeadingCoefficientSingular(
        "no equivalent representation with invertible leading coefficient")


def _chop(p: LaurentPolynomial, tol=1e-12) -> LaurentPolynomial:
    if p.is_zero():
        return p
    a = p.as_array()
    scale = np.max(np.abs(a))
    return LaurentPolynomial([0.0 if abs(c) <= tol * scale else c for c in a], p.low)


def _blocks(M: LaurentMatrix, lo: int, hi: int) -> list:
    return [M.coefficient(k, dtype=float) for k in range(lo, hi + 1)]


def simulate(P: LtiProcessModel, cfg: SimConfig, noise=None, return_noise: bool = False):
    """Simulate ``R(sigma) w = e`` from a zero initial window.

    ``noise`` optionally injects the driving sequence (array of shape
    ``(count, m)``; the required ``count`` is reported by the returned noise
    window when ``return_noise`` is set).  With ``return_noise`` the result is
    ``(trajectory, noise_window)``.
    """
    K = P.kernel
    if K.m != K.n:
        raise NotSquare(f"only square kernels can be simulated, got {K.m}x{K.n}")
    stable, roots = stability_check(K)
    if not stable:
        raise UnstableKernel(roots)
    R2, U = proper_representation(K.matrix)
    n = K.n
    lo, hi = R2.low, R2.high
    s = hi - lo
    u_lo, u_hi = U.low, U.high
    T = cfg.burn_in + cfg.length

    # e' (t) = U(sigma) e (t) for t in [-lo, T - 1 - hi]
    e_start = -lo + u_lo
    steps = T - s
    count = steps + (u_hi - u_lo)
    if noise is None:
        rng = np.random.Generator(np.random.PCG64(cfg.seed))
        e = rng.standard_normal((count, n))
    else:
        e = np.asarray(getattr(noise, "samples", noise), dtype=float).reshape(-1, n)
        if e.shape[0] != count:
            raise ValueError(f"injected noise must have {count} samples, got {e.shape[0]}")

    Ub = _blocks(U, u_lo, u_hi)
    if len(Ub) == 1 and np.array_equal(Ub[0], np.eye(n)):
        ep = e
    else:
        ep = np.zeros((steps, n))
        for i, Ui in enumerate(Ub):
            ep += e[i:i + steps] @ Ui.T

    blocks = _blocks(R2, lo, hi)
    lead = blocks[-1]
    try:
        lead_inv = np.linalg.inv(lead)
    except np.linalg.LinAlgError:
        raise LeadingCoefficientSingular("leading coefficient is singular") from None
    g = ep @ lead_inv.T
    w = np.zeros((T, n))
    if s == 0:
        w[:] = g
    elif n == 1:
        a = np.concatenate([[1.0], [float(lead_inv[0, 0] * b[0, 0]) for b in blocks[-2::-1]]])
        w[:, 0] = signal.lfilter([1.0], a, np.concatenate([np.zeros(s), g[:, 0]]))
    else:
        # w[t] = g[t - s] - sum_i A_i w[t - s + i]
        A = np.hstack([lead_inv @ b for b in blocks[:-1]])
        for t in range(s, T):
            w[t] = g[t - s] - A @ w[t - s:t].reshape(-1)
    traj = Trajectory(cfg.burn_in, w[cfg.burn_in:])
    if return_noise:
        return traj, Trajectory(e_start, e)
    return traj


def residual_noise(K: KernelRepresentation, w: TrajectoryWindow) -> Trajectory:
    """``R(sigma) w``: recovers the driving noise of a simulated trajectory."""
    r = apply_shift(K, w)
    return Trajectory(r.start_time, r.samples.astype(float))


def welch_spectrum(w: TrajectoryWindow, segment_length: int = DEFAULT_SEGMENT,
                   overlap_fraction: float = 0.5) -> SpectrumEstimate:
    """Hann-windowed averaged periodogram on ``theta_k = 2 pi k / L``.

    Normalised as ``Phi(theta) = sum_k E[w(t+k) w(t)^T] e^{-j k theta}``, so
    unit-variance white noise has estimate 1 at every frequency.
    """
    N = w.length
    L = int(segment_length)
    if L < 2 or L & (L - 1):
        raise ValueError("segment_length must be a power of two")
    if L > N:
        raise SegmentTooLong(f"segment length {L} exceeds trajectory length {N}")
    if not 0 <= overlap_fraction < 1:
        raise ValueError("overlap_fraction must lie in [0, 1)")
    noverlap = int(overlap_fraction * L)
    x = np.asarray(w.samples, dtype=float)
    kw = dict(fs=1.0, window="hann", nperseg=L, noverlap=noverlap,
              detrend=False, return_onesided=False, scaling="density")
    n = x.shape[1]
    if n == 1:
        _, p = signal.welch(x[:, 0], **kw)
        values = np.real(p)
    else:
        values = np.zeros((L, n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                # csd(x, y) averages conj(X) Y
                _, values[:, i, j] = signal.csd(x[:, j], x[:, i], **kw)
    segments = (N - noverlap) // (L - noverlap)
    return SpectrumEstimate(frequency_grid(L), values, segments, L)


def compare_spectrum(est: SpectrumEstimate, D: SpectralDensity) -> SpectrumComparison:
    """Relative errors ``|est - Phi| / Phi`` against the analytic density."""
    if D.n != 1 or not est.is_scalar:
        raise NotScalar("spectrum comparison is defined for scalar densities")
    L = len(est.grid)
    if not np.allclose(est.grid, frequency_grid(L), rtol=0, atol=1e-12):
        raise GridMismatch("estimate grid is not the uniform grid 2 pi k / L")
    truth = density_eval(D, L)[:, 0, 0].real
    rel = np.abs(est.values - truth) / truth
    return SpectrumComparison(float(np.mean(rel)), float(np.max(rel)))


# -- CSV ------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_trajectory_csv(fh, traj: TrajectoryWindow) -> None:
    """``t,w1,...,wn`` with 17 significant digits."""
    wr = csv.writer(fh, lineterminator="\n")
    wr.writerow(["t"] + [f"w{i + 1}" for i in range(traj.dim)])
    for t, row in zip(traj.times, np.asarray(traj.samples, dtype=float)):
        wr.writerow([str(int(t))] + [_fmt(v) for v in row])


def read_trajectory_csv(fh) -> Trajectory:
    rd = csv.reader(fh)
    header = next(rd)
    if not header or header[0] != "t":
        raise ValueError("trajectory CSV must start with a 't' column")
    ts, rows = [], []
    for rec in rd:
        if rec:
            ts.append(int(rec[0]))
            rows.append([float(v) for v in rec[1:]])
    if not rows:
        raise ValueError("trajectory CSV has no samples")
    if ts != list(range(ts[0], ts[0] + len(ts))):
        raise ValueError("trajectory times must be consecutive")
    return Trajectory(ts[0], np.array(rows))


def write_spectrum_csv(fh, grid: np.ndarray, values: np.ndarray) -> None:
    """``theta,value`` for scalar spectra, ``theta,re_ij,im_ij,...`` otherwise."""
    wr = csv.writer(fh, lineterminator="\n")
    values = np.asarray(values)
    if values.ndim == 3 and values.shape[1:] == (1, 1):
        values = values[:, 0, 0].real
    if values.ndim == 1:
        wr.writerow(["theta", "value"])
        for th, v in zip(grid, np.real(values)):
            wr.writerow([_fmt(th), _fmt(v)])
        return
    n = values.shape[1]
    head = ["theta"]
    for i in range(n):
        for j in range(n):
            head += [f"re_{i + 1}{j + 1}", f"im_{i + 1}{j + 1}"]
    wr.writerow(head)
    for th, V in zip(grid, values):
        rec = [_fmt(th)]
        for i in range(n):
            for j in range(n):
                rec += [_fmt(V[i, j].real), _fmt(V[i, j].imag)]
        wr.writerow(rec)


def trajectory_csv_text(traj: TrajectoryWindow) -> str:
    buf = io.StringIO()
    write_trajectory_csv(buf, traj)
    return buf.getvalue()
