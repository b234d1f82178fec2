"""Dense/sparse complex operator calculus.

Operators are plain ``numpy`` arrays (complex128, row-major) or
``scipy.sparse`` matrices; there is no wrapper class.  All functions are
pure and never mutate their arguments.

Operator norms are computed from the Hermitian dilation
``[[0, A], [A*, 0]]`` so that a single symmetric eigensolver path serves
rectangular, square and Hermitian inputs alike.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import eigsh

from .errors import ShapeError

EIG_TOL = 1e-10
HERMITIAN_DRIFT = 1e-8

# below this dimension sparse inputs are densified before the eigen-solve;
# Lanczos overhead dominates for small matrices
_DENSE_CUTOFF = 384


def as_operator(a):
    """Coerce to a 2-d complex128 ndarray (sparse inputs pass through)."""
    if sparse.issparse(a):
        return a.astype(np.complex128)
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ShapeError(f"operator must be 2-d, got shape {a.shape}")
    return a


def adjoint(a):
    if sparse.issparse(a):
        return a.conj().T
    return np.conj(a).T


def commutator(a, b):
    """AB - BA for square operators of equal dimension."""
    if a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ShapeError(f"commutator needs equal square shapes, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def anticommutator(a, b):
    if a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ShapeError(f"anticommutator needs equal square shapes, got {a.shape} and {b.shape}")
    return a @ b + b @ a


def direct_sum(a, b):
    """Block-diagonal stacking A (+) B."""
    if sparse.issparse(a) or sparse.issparse(b):
        return sparse.block_diag([a, b], format="csr", dtype=np.complex128)
    a, b = as_operator(a), as_operator(b)
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.complex128)
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


def tensor(a, b):
    """Kronecker product A (x) B."""
    if sparse.issparse(a) or sparse.issparse(b):
        return sparse.kron(a, b, format="csr")
    return np.kron(as_operator(a), as_operator(b))


def frobenius(a):
    if sparse.issparse(a):
        return float(np.sqrt(abs(a.multiply(a.conj())).sum()))
    return float(np.linalg.norm(a))


def hermitian_dilation(a):
    """[[0, A], [A*, 0]]; its spectrum is {+/- sigma_i(A)}."""
    r, c = a.shape
    if sparse.issparse(a):
        return sparse.bmat([[None, a], [adjoint(a), None]], format="csr").astype(np.complex128)
    out = np.zeros((r + c, r + c), dtype=np.complex128)
    out[:r, r:] = a
    out[r:, :r] = adjoint(a)
    return out


def _deterministic_start(n):
    # fixed, non-degenerate Lanczos start so repeated runs give identical output
    v = np.cos(np.arange(n, dtype=np.float64) + 0.5)
    return v / np.linalg.norm(v)


def operator_norm(a, hermitian=False):
    """Largest singular value of ``a``.

    With ``hermitian=True`` the input is symmetrized as (A + A*)/2 before
    the eigen-solve; drift ||A - A*||_F beyond 1e-8 raises, guarding against
    accumulated round-off being silently averaged away.
    """
    a = as_operator(a)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0.0
    if hermitian:
        drift = frobenius(a - adjoint(a))
        if drift > HERMITIAN_DRIFT:
            raise ValueError(f"asserted-Hermitian input drifted by {drift:.3e} > {HERMITIAN_DRIFT:g}")
        sym = (a + adjoint(a)) / 2.0
        if sparse.issparse(sym):
            return _sparse_sym_norm(sym)
        return float(np.max(np.abs(np.linalg.eigvalsh(sym))))
    if sparse.issparse(a):
        if max(a.shape) <= _DENSE_CUTOFF:
            a = a.toarray()
        else:
            return _sparse_sym_norm(hermitian_dilation(a))
    dil = hermitian_dilation(a)
    return float(np.max(np.linalg.eigvalsh(dil)))


def _sparse_sym_norm(h):
    if h.nnz == 0:
        return 0.0
    n = h.shape[0]
    if n <= _DENSE_CUTOFF:
        return float(np.max(np.abs(np.linalg.eigvalsh(h.toarray()))))
    lo = eigsh(h, k=1, which="SA", v0=_deterministic_start(n), return_eigenvectors=False)
    hi = eigsh(h, k=1, which="LA", v0=_deterministic_start(n), return_eigenvectors=False)
    return float(max(abs(lo[0]), abs(hi[0])))


class PartialIsometryReport(NamedTuple):
    is_partial_isometry: bool
    is_coisometry: bool
    defect: float
    coisometry_defect: float


def is_partial_isometry(u, tol=1e-9):
    """Check ||u u* u - u|| <= tol; also reports whether u u* = Id."""
    u = as_operator(u)
    uh = adjoint(u)
    defect = operator_norm(u @ uh @ u - u)
    co = u @ uh
    co_defect = operator_norm(co - np.eye(u.shape[0]))
    return PartialIsometryReport(defect <= tol, co_defect <= tol, float(defect), float(co_defect))


def projection_defect(p):
    """max(||P^2 - P||, ||P - P*||); zero iff P is an orthogonal projection."""
    p = as_operator(p)
    if p.shape[0] != p.shape[1]:
        raise ShapeError("projection must be square")
    if sparse.issparse(p):
        return float(max(operator_norm(p @ p - p), operator_norm(p - adjoint(p))))
    return float(max(operator_norm(p @ p - p), operator_norm(p - adjoint(p))))


def is_projection(p, tol=1e-9):
    return projection_defect(p) <= tol


def top_singular_pairs(a, k=1):
    """Leading singular triples (sigma_i, u_i, w_i), descending.

    Dense path below the sparse cutoff; deterministic-start Lanczos above.
    """
    from scipy.sparse.linalg import svds

    if sparse.issparse(a) and max(a.shape) <= _DENSE_CUTOFF:
        a = a.toarray()
    if not sparse.issparse(a):
        u, s, vh = np.linalg.svd(a)
        k = min(k, len(s))
        return [(float(s[i]), u[:, i], vh[i, :].conj()) for i in range(k)]
    if a.nnz == 0:
        m, n = a.shape
        out = []
        for i in range(min(k, m, n)):
            u = np.zeros(m, dtype=np.complex128)
            w = np.zeros(n, dtype=np.complex128)
            u[i] = 1.0
            w[i] = 1.0
            out.append((0.0, u, w))
        return out
    k = min(k, min(a.shape) - 1)
    k = max(k, 1)
    u, s, vh = svds(a, k=k, v0=_deterministic_start(min(a.shape)))
    order = np.argsort(-s)
    return [(float(s[i]), u[:, i], vh[i, :].conj()) for i in order]
