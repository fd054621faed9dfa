"""The finite-dimensional Hilbert-space instance of branching predicates.

A predicate on C^n is a pair of effects summing to the identity; the pair
is a single map C^n -> C^n (+) C^n once the doubled space is read as
C^{2n} with the first n coordinates forming the left summand.  That
coordinate convention is normative for every stacked matrix produced
here.

Substitution along an isometry f is conjugation, componentwise f* q f;
its scalar case (f a unit column vector) is the probability of the
predicate in that state.  The classifier of a predicate is the stacked
pair of square roots, an isometry into the doubled space, and measurement
is post-composition with it (on unit vectors) or conjugation by it (on
density matrices).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import config
from .linalg import (
    as_matrix,
    dagger,
    eigen_hermitian,
    hermitian_deviation,
    hermitian_part,
    kernel_basis,
    sqrt_psd,
    trace,
)


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Effect:
    """A Hermitian matrix between 0 and the identity in the semidefinite order."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError("effect must be square")
        if hermitian_deviation(m) > config.EPS:
            raise ValueError("effect must be Hermitian")
        vals = eigen_hermitian(m).eigenvalues
        if vals.size and (vals[-1] < -config.PSD_TOL or vals[0] > 1.0 + config.PSD_TOL):
            raise ValueError(f"effect spectrum [{vals[-1]}, {vals[0]}] leaves [0, 1]")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class QPredicate:
    """A pair of effects summing to the identity (left part first)."""

    first: Effect
    second: Effect

    def __post_init__(self):
        if self.first.dim != self.second.dim:
            raise ValueError("components must share a dimension")
        total = self.first.matrix + self.second.matrix
        if np.max(np.abs(total - np.eye(self.first.dim))) > config.EPS:
            raise ValueError("components must sum to the identity")

    @property
    def dim(self) -> int:
        return self.first.dim

    def perp(self) -> "QPredicate":
        return QPredicate(self.second, self.first)

    @classmethod
    def from_effect(cls, a: Effect | np.ndarray) -> "QPredicate":
        if not isinstance(a, Effect):
            a = Effect(a)
        return cls(a, Effect(np.eye(a.dim) - a.matrix))


def truth(n: int) -> QPredicate:
    return QPredicate.from_effect(Effect(np.eye(n)))


def falsity(n: int) -> QPredicate:
    return QPredicate.from_effect(Effect(np.zeros((n, n))))


@dataclass(frozen=True, eq=False)
class PureState:
    """A unit column vector."""

    vector: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=np.complex128).reshape(-1)
        if abs(np.linalg.norm(v) - 1.0) > config.EPS:
            raise ValueError(f"state norm {np.linalg.norm(v)} is not 1")
        out = v.copy()
        out.setflags(write=False)
        object.__setattr__(self, "vector", out)

    @property
    def dim(self) -> int:
        return self.vector.shape[0]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A positive semidefinite matrix of unit trace."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if hermitian_deviation(m) > config.EPS:
            raise ValueError("density matrix must be Hermitian")
        vals = eigen_hermitian(m).eigenvalues
        if vals.size and vals[-1] < -config.PSD_TOL:
            raise ValueError("density matrix must be positive semidefinite")
        if abs(trace(m).real - 1.0) > config.EPS:
            raise ValueError(f"trace {trace(m).real} is not 1")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_pure(cls, x: PureState) -> "DensityMatrix":
        v = x.vector.reshape(-1, 1)
        return cls(v @ dagger(v))


@dataclass(frozen=True, eq=False)
class Isometry:
    """A tall matrix V with V*V equal to the identity on its source."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        rows, cols = m.shape
        if rows < cols:
            raise ValueError("isometry must have at least as many rows as columns")
        if cols:
            gram = dagger(m) @ m
            if np.max(np.abs(gram - np.eye(cols))) > config.POST_EPS:
                raise ValueError("columns are not orthonormal")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def source_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def target_dim(self) -> int:
        return self.matrix.shape[0]


# -- effect algebra and module structure ------------------------------------

def orthosum(p: QPredicate, q: QPredicate):
    """Pointwise sum of the left parts when it stays below the identity."""
    if p.dim != q.dim:
        raise ValueError("dimension mismatch")
    s = p.first.matrix + q.first.matrix
    vals = eigen_hermitian(s).eigenvalues
    if vals.size and vals[0] > 1.0 + config.PSD_TOL:
        return None
    return QPredicate.from_effect(Effect(s))


def probability_multiply(s: float, p: QPredicate) -> QPredicate:
    """Scale the left part by a probability."""
    if not -config.EPS <= s <= 1.0 + config.EPS:
        raise ValueError("scalar must lie in [0, 1]")
    s = min(max(s, 0.0), 1.0)
    return QPredicate.from_effect(Effect(s * p.first.matrix))


def substitute(f: Isometry, q: QPredicate) -> QPredicate:
    """Pull a predicate back along an isometry, conjugating both parts."""
    if f.target_dim != q.dim:
        raise ValueError("predicate dimension must match the isometry target")
    v = f.matrix
    return QPredicate(
        Effect(dagger(v) @ q.first.matrix @ v),
        Effect(dagger(v) @ q.second.matrix @ v),
    )


def substitute_effect(f: Isometry, a: Effect) -> Effect:
    if f.target_dim != a.dim:
        raise ValueError("effect dimension must match the isometry target")
    return Effect(dagger(f.matrix) @ a.matrix @ f.matrix)


def born_probability(x: PureState, p: QPredicate | Effect) -> float:
    """The probability of the predicate in a pure state, by substitution.

    This is the scalar case of ``substitute``: the state is a one-column
    isometry and conjugation lands in the 1x1 effects, i.e. [0, 1].
    """
    a = p.first.matrix if isinstance(p, QPredicate) else p.matrix
    if a.shape[0] != x.dim:
        raise ValueError("dimension mismatch")
    val = complex(np.conj(x.vector) @ (a @ x.vector))
    if abs(val.imag) > config.EPS:
        raise ValueError(f"probability has imaginary part {val.imag}")
    return min(max(val.real, 0.0), 1.0)


def born_spectral(x: PureState, p: QPredicate | Effect) -> float:
    """The same probability through the spectral decomposition.

    Independent route for cross-checking: eigenvalues weight the squared
    overlaps with the eigenvectors.
    """
    a = p.first.matrix if isinstance(p, QPredicate) else p.matrix
    if a.shape[0] != x.dim:
        raise ValueError("dimension mismatch")
    eig = eigen_hermitian(a)
    overlaps = np.abs(dagger(eig.vectors) @ x.vector) ** 2
    return float(np.real(np.sum(eig.eigenvalues * overlaps)))


# -- classifiers, tests and measurement --------------------------------------

def char_sqrt(p: QPredicate) -> Isometry:
    """The classifying isometry of a predicate: stacked square roots.

    The 2n x n stack of the two component square roots; pulling the
    canonical left predicate of the doubled space back along it recovers
    the predicate.
    """
    top = sqrt_psd(p.first.matrix)
    bottom = sqrt_psd(p.second.matrix)
    return Isometry(np.vstack([top, bottom]))


def omega_predicate(n: int) -> QPredicate:
    """The canonical "left half" predicate on the doubled space C^{2n}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    first = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    first[:n, :n] = np.eye(n)
    return QPredicate.from_effect(Effect(first))


def test_andthen(a: Effect, b: Effect) -> Effect:
    """Sequential test: sqrt(a) b sqrt(a)."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    r = sqrt_psd(a.matrix)
    return Effect(hermitian_part(r @ b.matrix @ r))


def test_then(a: Effect, b: Effect) -> Effect:
    """Guarded test: sqrt(a) b sqrt(a) + (1 - a)."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    r = sqrt_psd(a.matrix)
    out = r @ b.matrix @ r + np.eye(a.dim) - a.matrix
    return Effect(hermitian_part(out))


def measure_pure(p: QPredicate, x: PureState) -> PureState:
    """Send a unit vector through the classifier of p.

    The first n amplitudes carry the "holds" branch, the last n the
    complement branch; the output is again a unit vector because the
    classifier is an isometry.
    """
    if p.dim != x.dim:
        raise ValueError("dimension mismatch")
    return PureState(char_sqrt(p).matrix @ x.vector)


def measure_density(p: QPredicate, rho: DensityMatrix) -> DensityMatrix:
    """Conjugate a density matrix by the classifier of p.

    Trace is preserved (cyclically, the classifier's two sides cancel),
    so the result is a density matrix on the doubled space.
    """
    if p.dim != rho.dim:
        raise ValueError("dimension mismatch")
    v = char_sqrt(p).matrix
    return DensityMatrix(v @ rho.matrix @ dagger(v))


def xi_state(rho: DensityMatrix) -> Callable[[Effect], float]:
    """The predicate-transformer view of a density matrix: A -> tr(rho A)."""

    def functional(a: Effect) -> float:
        if a.dim != rho.dim:
            raise ValueError("dimension mismatch")
        val = trace(rho.matrix @ a.matrix)
        if abs(val.imag) > config.POST_EPS:
            raise ValueError("trace pairing has a nonreal value")
        return min(max(val.real, 0.0), 1.0)

    return functional


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """An n-outcome projective measurement decomposed into binary predicates.

    ``components`` are the verified branch effects in outcome order;
    ``predicates`` are the binary yes/no predicates whose nesting
    reproduces them.
    """

    components: tuple[Effect, ...]
    predicates: tuple[QPredicate, ...]


def projective_compose(projections: Sequence[Effect | np.ndarray],
                       tol: float = config.POST_EPS) -> ProjectiveMeasurement:
    """Fold a complete family of orthogonal projections into binary tests.

    Requires each input to be a projection, pairwise products to vanish
    and the family to sum to the identity (all within ``tol``).  The
    nested binary splits "does outcome i hold, else continue" compose to
    exactly the given family; the composition is re-derived and verified
    here before returning.
    """
    mats = [p.matrix if isinstance(p, Effect) else as_matrix(p) for p in projections]
    if len(mats) < 2:
        raise ValueError("need at least two projections")
    n = mats[0].shape[0]
    for m in mats:
        if m.shape != (n, n):
            raise ValueError("projections must share a dimension")
        if np.max(np.abs(m @ m - m)) > tol or hermitian_deviation(m) > tol:
            raise ValueError("input is not a projection")
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if np.max(np.abs(mats[i] @ mats[j])) > tol:
                raise ValueError(f"projections {i} and {j} are not orthogonal")
    if np.max(np.abs(sum(mats) - np.eye(n))) > tol:
        raise ValueError("projections do not sum to the identity")

    predicates = tuple(QPredicate.from_effect(Effect(m)) for m in mats[:-1])
    components = []
    remainder = np.eye(n, dtype=np.complex128)
    for m in mats[:-1]:
        components.append(hermitian_part(m @ remainder))
        remainder = (np.eye(n) - m) @ remainder
    components.append(hermitian_part(remainder))
    for derived, given in zip(components, mats):
        if np.max(np.abs(derived - given)) > config.PSD_TOL:
            raise AssertionError("nested binary tests failed to reproduce the family")
    return ProjectiveMeasurement(tuple(Effect(c) for c in components), predicates)


def predicate_from_isometry(k: Isometry) -> QPredicate:
    """The sharp predicate spanned by an isometry's image: k k* paired
    with its complement."""
    m = k.matrix @ dagger(k.matrix)
    return QPredicate.from_effect(Effect(hermitian_part(m)))


def comprehension(q: QPredicate) -> Isometry:
    """The subspace where q holds outright: the kernel of the second part.

    Returns the inclusion isometry (possibly with zero columns).  On that
    subspace the first component acts as the identity.
    """
    basis = kernel_basis(q.second.matrix)
    return Isometry(basis)


def bifmrel_substitute(r, n) -> np.ndarray:
    """Substitution for matrix-valued relations: x, x' -> sum over y, y' of
    r(x,y) n(y,y') conj(r(x',y')).

    ``r`` plays the role of a dagger mono from X to Y, which for matrices
    means r r* = identity on X.  The triple sum is exactly r n r*.
    """
    r = as_matrix(r)
    n = as_matrix(n)
    if n.shape[0] != n.shape[1] or r.shape[1] != n.shape[0]:
        raise ValueError("shape mismatch")
    if np.max(np.abs(r @ dagger(r) - np.eye(r.shape[0]))) > config.POST_EPS:
        raise ValueError("relation rows are not orthonormal")
    return r @ n @ dagger(r)


# -- random generators (used by the self test and by property suites) -------

def random_isometry(rng: np.random.Generator, rows: int, cols: int) -> Isometry:
    """A Haar-ish random isometry built by modified Gram-Schmidt."""
    if rows < cols:
        raise ValueError("rows must be >= cols")
    m = rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))
    q = np.zeros((rows, cols), dtype=np.complex128)
    for j in range(cols):
        v = m[:, j]
        for k in range(j):
            v = v - (q[:, k].conj() @ v) * q[:, k]
        v = v / np.linalg.norm(v)
        q[:, j] = v
    return Isometry(q)


def random_effect(rng: np.random.Generator, n: int) -> Effect:
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = hermitian_part(m)
    vals = eigen_hermitian(h).eigenvalues
    lo, hi = float(vals[-1]), float(vals[0])
    span = max(hi - lo, 1.0)
    scaled = (h - lo * np.eye(n)) / span
    return Effect(scaled * rng.uniform(0.2, 1.0))


def random_predicate(rng: np.random.Generator, n: int) -> QPredicate:
    return QPredicate.from_effect(random_effect(rng, n))


def random_pure_state(rng: np.random.Generator, n: int) -> PureState:
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return PureState(v / np.linalg.norm(v))


def random_density(rng: np.random.Generator, n: int) -> DensityMatrix:
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = m @ dagger(m)
    return DensityMatrix(rho / np.trace(rho).real)


# -- named constants ---------------------------------------------------------

KET0 = np.array([1.0, 0.0], dtype=np.complex128)
KET1 = np.array([0.0, 1.0], dtype=np.complex128)
KET_NE = np.array([1.0, 1.0], dtype=np.complex128) / np.sqrt(2.0)
KET_NW = np.array([1.0, -1.0], dtype=np.complex128) / np.sqrt(2.0)
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=np.complex128) / np.sqrt(2.0)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=np.complex128)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)


def projector(x: PureState) -> Effect:
    v = x.vector.reshape(-1, 1)
    return Effect(v @ dagger(v))
