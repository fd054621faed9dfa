"""Dense complex linear algebra for Hermitian matrices.

A self-contained cyclic Jacobi eigensolver with a pinned eigenvector
gauge, operator square roots, the semidefinite (Loewner) order, traces and
kernel bases.  Matrices are numpy arrays of complex128; the decomposition
itself is implemented here so that phases, tie-breaking and thresholds are
fully deterministic (golden outputs elsewhere depend on this gauge).

Conventions fixed by the solver:

* eigenvalues are returned in descending order, ties kept in the order
  the diagonal produced them (stable sort);
* near-degenerate eigenvalue clusters (gap below ``CLUSTER_TOL``) are
  re-orthonormalised by modified Gram-Schmidt;
* each eigenvector is scaled so its first entry of largest modulus is
  real and non-negative.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from . import config


class JacobiConvergenceError(Exception):
    """The sweep limit was reached before the off-diagonal mass vanished."""


class NotPsdError(ValueError):
    """A matrix required to be positive semidefinite has a negative eigenvalue."""


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError("expected a two-dimensional array")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def hermitian_part(a: np.ndarray) -> np.ndarray:
    a = as_matrix(a)
    return (a + dagger(a)) / 2.0


def hermitian_deviation(a: np.ndarray) -> float:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - dagger(a))))


@dataclass(frozen=True, eq=False)
class HermitianEigen:
    """Spectral data: real eigenvalues (descending) and orthonormal columns."""

    eigenvalues: np.ndarray
    vectors: np.ndarray


def _offdiag_frobenius(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _rotation(app: float, aqq: float, apq: complex) -> np.ndarray:
    """The 2x2 unitary that zeroes the (p, q) entry of a Hermitian matrix."""
    r = abs(apq)
    phase = apq / r
    tau = (aqq - app) / (2.0 * r)
    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
    c = 1.0 / math.hypot(1.0, t)
    s = t * c
    g = np.array([[c, s], [-s, c]], dtype=np.complex128)
    return np.diag([1.0, np.conj(phase)]).astype(np.complex128) @ g


def eigen_hermitian(a, hermitian_tol: float = 1e-10) -> HermitianEigen:
    """Diagonalise a Hermitian matrix by cyclic Jacobi rotations.

    The input may deviate from Hermitian by at most ``hermitian_tol`` per
    entry and is symmetrised before iterating.  Sweeps run until the
    off-diagonal Frobenius norm falls below ``JACOBI_OFFDIAG_TOL`` and
    raise after ``JACOBI_MAX_SWEEPS`` sweeps without convergence.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if hermitian_deviation(a) > hermitian_tol:
        raise ValueError(f"matrix is not Hermitian within {hermitian_tol}")
    if n == 0:
        return HermitianEigen(np.zeros(0), np.zeros((0, 0), dtype=np.complex128))

    work = hermitian_part(a)
    vecs = np.eye(n, dtype=np.complex128)
    converged = _offdiag_frobenius(work) < config.JACOBI_OFFDIAG_TOL
    for _ in range(config.JACOBI_MAX_SWEEPS):
        if converged:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(work[p, q]) < 1e-18:
                    continue
                u = _rotation(work[p, p].real, work[q, q].real, work[p, q])
                work[[p, q], :] = dagger(u) @ work[[p, q], :]
                work[:, [p, q]] = work[:, [p, q]] @ u
                vecs[:, [p, q]] = vecs[:, [p, q]] @ u
                work[p, q] = 0.0
                work[q, p] = 0.0
                work[p, p] = work[p, p].real
                work[q, q] = work[q, q].real
        converged = _offdiag_frobenius(work) < config.JACOBI_OFFDIAG_TOL
    if not converged:
        raise JacobiConvergenceError(
            f"no convergence after {config.JACOBI_MAX_SWEEPS} sweeps"
        )

    values = np.real(np.diag(work)).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vecs = vecs[:, order]
    vecs = _orthonormalise_clusters(values, vecs)
    vecs = _fix_phases(vecs)
    return HermitianEigen(values, vecs)


def _orthonormalise_clusters(values: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt inside each near-degenerate eigenvalue cluster."""
    n = len(values)
    vecs = vecs.copy()
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and values[stop - 1] - values[stop] < config.CLUSTER_TOL:
            stop += 1
        if stop - start > 1:
            for j in range(start, stop):
                v = vecs[:, j]
                for k in range(start, j):
                    v = v - (vecs[:, k].conj() @ v) * vecs[:, k]
                norm = np.linalg.norm(v)
                if norm > 0:
                    vecs[:, j] = v / norm
        start = stop
    return vecs


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    vecs = vecs.copy()
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        idx = int(np.argmax(np.abs(col)))
        pivot = col[idx]
        if abs(pivot) > 0:
            vecs[:, j] = col * (np.conj(pivot) / abs(pivot))
    return vecs


def is_psd(a) -> bool:
    """Positive semidefinite: smallest eigenvalue above -PSD_TOL."""
    eig = eigen_hermitian(a)
    return bool(eig.eigenvalues.size == 0 or eig.eigenvalues[-1] >= -config.PSD_TOL)


def loewner_leq(a, b) -> bool:
    """a <= b in the semidefinite order: b - a is positive semidefinite."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError("shape mismatch")
    return is_psd(b - a)


def trace(a) -> complex:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    return complex(np.trace(a))


def sqrt_psd(a) -> np.ndarray:
    """The positive square root of a positive semidefinite matrix.

    Eigenvalues below ``PSD_TOL`` in magnitude are treated as exact zeros
    (the square root would amplify eigenvalue dust from 1e-16 to 1e-8);
    anything below -PSD_TOL raises ``NotPsdError``.  Projections are
    reproduced sharply, since their spectrum is fixed by the square root.
    """
    eig = eigen_hermitian(a)
    values = eig.eigenvalues.copy()
    if values.size and values[-1] < -config.PSD_TOL:
        raise NotPsdError(f"eigenvalue {values[-1]} below -{config.PSD_TOL}")
    values[values < config.PSD_TOL] = 0.0
    root = eig.vectors @ np.diag(np.sqrt(values)) @ dagger(eig.vectors)
    return hermitian_part(root)


def kernel_basis(a) -> np.ndarray:
    """Orthonormal columns spanning the eigenspaces with |eigenvalue| < KERNEL_TOL.

    Returns an n x 0 matrix when the kernel is trivial.
    """
    eig = eigen_hermitian(a)
    keep = np.abs(eig.eigenvalues) < config.KERNEL_TOL
    return eig.vectors[:, keep]


# ---------------------------------------------------------------------------
# Matrix literal text format: a "rows cols" header line, then one line per
# row of whitespace-separated a+bi entries, printed to 9 significant digits.

_NUM = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_FULL_RE = re.compile(rf"^(?P<re>{_NUM})(?P<im>[+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)i$")
_REAL_RE = re.compile(rf"^(?P<re>{_NUM})$")
_IMAG_RE = re.compile(rf"^(?P<im>[+-]?(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)i$")


def parse_complex(token: str) -> complex:
    token = token.strip()
    m = _FULL_RE.match(token)
    if m:
        im = m.group("im")
        imag = 1.0 if im == "+" else -1.0 if im == "-" else float(im)
        return complex(float(m.group("re")), imag)
    m = _REAL_RE.match(token)
    if m:
        return complex(float(m.group("re")), 0.0)
    m = _IMAG_RE.match(token)
    if m:
        im = m.group("im")
        imag = 1.0 if im in ("", "+") else -1.0 if im == "-" else float(im)
        return complex(0.0, imag)
    raise ValueError(f"bad complex literal {token!r}")


def _fmt_real(x: float, sig: int) -> str:
    if x == 0.0:
        x = 0.0  # normalise -0.0
    return f"{x:.{sig}g}"


def format_complex(z: complex, sig: int = 9) -> str:
    re_part = _fmt_real(float(z.real), sig)
    im = float(z.imag)
    sign = "-" if im < 0 else "+"
    return f"{re_part}{sign}{_fmt_real(abs(im), sig)}i"


def format_matrix(a, sig: int = 9) -> str:
    a = as_matrix(a)
    rows, cols = a.shape
    lines = [f"{rows} {cols}"]
    for i in range(rows):
        lines.append(" ".join(format_complex(a[i, j], sig) for j in range(cols)))
    return "\n".join(lines)


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in (raw.strip() for raw in text.strip().splitlines()) if ln]
    if not lines:
        raise ValueError("empty matrix literal")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("matrix literal must start with 'rows cols'")
    rows, cols = int(head[0]), int(head[1])
    if len(lines) - 1 != rows:
        raise ValueError(f"expected {rows} rows, found {len(lines) - 1}")
    out = np.zeros((rows, cols), dtype=np.complex128)
    for i, line in enumerate(lines[1:]):
        entries = line.split()
        if len(entries) != cols:
            raise ValueError(f"row {i} has {len(entries)} entries, expected {cols}")
        for j, token in enumerate(entries):
            out[i, j] = parse_complex(token)
    return out
