"""Dense linear algebra over GF(p) on numpy int64 arrays.

All routines take a prime ``p`` below 2**31 so that products of two
reduced entries fit in a signed 64-bit word.  Subspaces are carried as
reduced row-echelon matrices whose rows form a basis.
"""

from __future__ import annotations

import numpy as np

MAX_PRIME = 2**31


def _inv(a, p):
    return pow(int(a), p - 2, p)


def rref(A, p):
    """Row-reduce ``A`` over GF(p).

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows of the
    reduced row-echelon form and ``pivots`` lists their pivot columns.
    """
    R = np.array(A, dtype=np.int64, copy=True) % p
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        if R[r, c] != 1:
            R[r, c:] = (R[r, c:] * _inv(R[r, c], p)) % p
        col = R[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            R[rows, c:] = (R[rows, c:] - np.outer(col[rows], R[r, c:])) % p
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(A, p):
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p):
    """Basis of ``{x : A x = 0}`` as the rows of the returned matrix."""
    A = np.asarray(A, dtype=np.int64)
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if m == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref(A, p)
    free = [c for c in range(n) if c not in set(pivots)]
    N = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        N[k, f] = 1
        for i, pc in enumerate(pivots):
            N[k, pc] = (-R[i, f]) % p
    return N


def matmul(A, B, p):
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    if (p - 1) ** 2 * A.shape[1] < 2**62:
        return (A @ B) % p
    # split the inner dimension so partial sums cannot overflow
    step = max(1, 2**62 // ((p - 1) ** 2))
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for s in range(0, A.shape[1], step):
        out = (out + (A[:, s:s + step] @ B[s:s + step]) % p) % p
    return out


class Subspace:
    """A subspace of GF(p)^n stored as a reduced row-echelon basis."""

    def __init__(self, n, p, rows=None):
        self.n = n
        self.p = p
        if rows is None or len(rows) == 0:
            self.basis = np.zeros((0, n), dtype=np.int64)
            self.pivots: list[int] = []
        else:
            self.basis, self.pivots = rref(np.asarray(rows).reshape(-1, n), p)

    @property
    def dim(self):
        return len(self.pivots)

    def reduce(self, V):
        """Reduce the rows of ``V`` modulo this subspace."""
        V = np.asarray(V, dtype=np.int64).reshape(-1, self.n) % self.p
        if self.dim == 0 or V.shape[0] == 0:
            return V
        coeff = V[:, self.pivots]
        return (V - matmul(coeff, self.basis, self.p)) % self.p

    def contains(self, V):
        return not self.reduce(V).any()

    def extend(self, V):
        """Add the rows of ``V``; return the new basis vectors introduced.

        The returned rows are the reduced row-echelon basis of ``V`` taken
        modulo the old subspace, so they lie in ``span(V) + self``.
        """
        W = self.reduce(V)
        if not W.any():
            return np.zeros((0, self.n), dtype=np.int64)
        new, _ = rref(W, self.p)
        new = self.reduce(new)
        new, _ = rref(new, self.p)
        self.basis, self.pivots = rref(np.vstack([self.basis, new]), self.p)
        return new

    def copy(self):
        s = Subspace(self.n, self.p)
        s.basis = self.basis.copy()
        s.pivots = list(self.pivots)
        return s


def solve(A, b, p):
    """One solution of ``A x = b`` over GF(p), or ``None`` if inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    m, n = A.shape
    b = np.asarray(b, dtype=np.int64).reshape(m)
    if m == 0:
        return np.zeros(n, dtype=np.int64)
    R, pivots = rref(np.hstack([A, b.reshape(m, 1)]), p)
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, n]
    return x


def preimage(A, p, relations=None):
    """Basis (rows) of ``{x : A x in colspan(relations)}``."""
    A = np.asarray(A, dtype=np.int64)
    m, n = A.shape
    if relations is None or relations.shape[1] == 0:
        return nullspace(A, p)
    K = nullspace(np.hstack([A, relations]), p)
    return rref(K[:, :n], p)[0] if K.shape[0] else np.zeros((0, n), dtype=np.int64)
