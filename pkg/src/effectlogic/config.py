"""Numerical tolerances shared across the package.

All comparisons of probabilities, operator entries and normalisation sums
go through these constants.  ``EPS`` governs structural equality,
definedness of partial sums and normalisation checks; ``POST_EPS`` is the
looser bound used after chains of floating-point arithmetic (spectral
round trips, substitution chains).  The values are read at call time, so
``set_epsilon`` must only be used once, before any evaluation starts (the
command line runner does exactly that).
"""

EPS = 1e-9
POST_EPS = 1e-8

# Jacobi eigensolver: stop once the off-diagonal Frobenius norm drops
# below this, give up after the sweep limit.
JACOBI_OFFDIAG_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

# Eigenvalues of magnitude below this count as kernel directions; the same
# threshold groups near-degenerate eigenvalues into clusters.
KERNEL_TOL = 1e-8
CLUSTER_TOL = 1e-8

# Matrices with an eigenvalue below -PSD_TOL are rejected as not positive
# semidefinite; eigenvalues in [-PSD_TOL, 0) are clamped to zero.
PSD_TOL = 1e-9


def set_epsilon(eps: float) -> None:
    """Override the global structural tolerance (and scale POST_EPS with it)."""
    global EPS, POST_EPS
    if eps <= 0:
        raise ValueError("tolerance must be positive")
    EPS = eps
    POST_EPS = max(10.0 * eps, 1e-8)
