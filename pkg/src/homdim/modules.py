"""Graded matrices, free modules and finitely presented graded modules.

A free module is a tuple of generator degrees.  A homogeneous map between
free modules is a :class:`GradedMatrix` whose column ``j`` is the image of
source generator ``j``; every entry has degree ``source_deg - target_deg``.
Everything is evaluated one internal degree at a time as a GF(p) matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .ring import RingElement


class CapError(RuntimeError):
    """An internal-degree cap is too small to certify a result."""


def free_offsets(algebra, degs, e):
    offs = [0]
    for d in degs:
        offs.append(offs[-1] + algebra.hilbert(e - d))
    return offs


def free_dim(algebra, degs, e):
    return sum(algebra.hilbert(e - d) for d in degs)


def degree_window(algebra, degs, cap):
    """Internal degrees where ``F = (+) R(-d)`` can be nonzero.

    Returns ``(lo, hi, exact)``.  For Artinian algebras the window is the
    true support; otherwise it stops at the absolute ``cap``.
    """
    if not degs:
        return 0, -1, True
    lo = min(degs)
    if algebra.is_artinian:
        return lo, max(degs) + algebra.top_degree, True
    return lo, cap, False


class GradedMatrix:
    """Degree-0 homogeneous map between graded free modules."""

    def __init__(self, algebra, rows, cols, entries=None, check=True):
        self.algebra = algebra
        self.rows = tuple(int(d) for d in rows)
        self.cols = tuple(int(d) for d in cols)
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not isinstance(v, RingElement):
                v = algebra.element(v)
            if v.is_zero:
                continue
            if check:
                if not (0 <= i < len(self.rows) and 0 <= j < len(self.cols)):
                    raise IndexError(f"entry ({i}, {j}) outside {len(self.rows)}x{len(self.cols)}")
                want = self.cols[j] - self.rows[i]
                if not v.is_homogeneous or v.degree != want:
                    raise ValueError(f"entry ({i}, {j}) = {v} is not homogeneous of degree {want}")
            clean[(i, j)] = v
        self.entries = clean
        self._cache: dict[int, np.ndarray] = {}

    @property
    def shape(self):
        return len(self.rows), len(self.cols)

    def __repr__(self):
        return f"GradedMatrix({len(self.rows)}x{len(self.cols)}, rows={self.rows}, cols={self.cols})"

    def __getitem__(self, ij):
        return self.entries.get(ij, self.algebra.zero())

    def __eq__(self, other):
        return (isinstance(other, GradedMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, len(self.entries)))

    @property
    def is_zero(self):
        return not self.entries

    @classmethod
    def zero(cls, algebra, rows, cols):
        return cls(algebra, rows, cols, {}, check=False)

    @classmethod
    def identity(cls, algebra, degs):
        one = algebra.one()
        return cls(algebra, degs, degs, {(i, i): one for i in range(len(degs))}, check=False)

    @classmethod
    def from_columns(cls, algebra, rows, columns, col_degs):
        entries = {}
        for j, col in enumerate(columns):
            for i, v in enumerate(col):
                if not v.is_zero:
                    entries[(i, j)] = v
        return cls(algebra, rows, col_degs, entries)

    def column(self, j):
        z = self.algebra.zero()
        out = [z] * len(self.rows)
        for (i, jj), v in self.entries.items():
            if jj == j:
                out[i] = v
        return out

    def columns(self):
        z = self.algebra.zero()
        out = [[z] * len(self.rows) for _ in self.cols]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    # arithmetic ------------------------------------------------------------
    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"cannot compose: {self.cols} vs {other.rows}")
        by_row: dict[int, list] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc: dict = {}
        for (i, k), u in self.entries.items():
            for j, v in by_row.get(k, ()):
                acc[(i, j)] = acc[(i, j)] + u * v if (i, j) in acc else u * v
        return GradedMatrix(self.algebra, self.rows, other.cols, acc, check=False)

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape/degree mismatch in sum")
        acc = dict(self.entries)
        for k, v in other.entries.items():
            acc[k] = acc[k] + v if k in acc else v
        return GradedMatrix(self.algebra, self.rows, self.cols, acc, check=False)

    def __neg__(self):
        return GradedMatrix(self.algebra, self.rows, self.cols,
                            {k: -v for k, v in self.entries.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if isinstance(c, int) and c % self.algebra.p == 1:
            return self
        return GradedMatrix(self.algebra, self.rows, self.cols,
                            {k: v * c for k, v in self.entries.items()}, check=False)

    def transpose(self):
        """Dual map ``Hom(G, R) -> Hom(F, R)``; generator degrees are negated."""
        return GradedMatrix(self.algebra, [-d for d in self.cols], [-d for d in self.rows],
                            {(j, i): v for (i, j), v in self.entries.items()}, check=False)

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row degrees differ in hstack")
        n = len(self.cols)
        ent = dict(self.entries)
        ent.update({(i, j + n): v for (i, j), v in other.entries.items()})
        return GradedMatrix(self.algebra, self.rows, self.cols + other.cols, ent, check=False)

    def vstack(self, other):
        if self.cols != other.cols:
            raise ValueError("column degrees differ in vstack")
        m = len(self.rows)
        ent = dict(self.entries)
        ent.update({(i + m, j): v for (i, j), v in other.entries.items()})
        return GradedMatrix(self.algebra, self.rows + other.rows, self.cols, ent, check=False)

    @staticmethod
    def block(algebra, blocks, row_degs, col_degs):
        """Assemble from a dict ``{(bi, bj): GradedMatrix}`` of blocks."""
        roff = np.cumsum([0] + [len(r) for r in row_degs])
        coff = np.cumsum([0] + [len(c) for c in col_degs])
        ent = {}
        for (bi, bj), M in blocks.items():
            if M is None:
                continue
            if M.rows != tuple(row_degs[bi]) or M.cols != tuple(col_degs[bj]):
                raise ValueError(f"block ({bi}, {bj}) has wrong degrees")
            for (i, j), v in M.entries.items():
                ent[(int(roff[bi]) + i, int(coff[bj]) + j)] = v
        rows = [d for r in row_degs for d in r]
        cols = [d for c in col_degs for d in c]
        return GradedMatrix(algebra, rows, cols, ent, check=False)

    def kron(self, other):
        """Tensor product of maps ``F (x) F' -> G (x) G'`` (index ``i * n' + k``)."""
        m2, n2 = other.shape
        rows = [a + b for a in self.rows for b in other.rows]
        cols = [a + b for a in self.cols for b in other.cols]
        ent = {}
        for (i, j), u in self.entries.items():
            for (k, l), v in other.entries.items():
                ent[(i * m2 + k, j * n2 + l)] = u * v
        return GradedMatrix(self.algebra, rows, cols, ent, check=False)

    def select_columns(self, idx):
        pos = {j: n for n, j in enumerate(idx)}
        ent = {(i, pos[j]): v for (i, j), v in self.entries.items() if j in pos}
        return GradedMatrix(self.algebra, self.rows, [self.cols[j] for j in idx], ent, check=False)

    def select_rows(self, idx):
        pos = {i: n for n, i in enumerate(idx)}
        ent = {(pos[i], j): v for (i, j), v in self.entries.items() if i in pos}
        return GradedMatrix(self.algebra, [self.rows[i] for i in idx], self.cols, ent, check=False)

    def shift(self, k):
        """Same map between twisted modules ``F(-k) -> G(-k)``."""
        return GradedMatrix(self.algebra, [d + k for d in self.rows], [d + k for d in self.cols],
                            self.entries, check=False)

    def scalar_part(self):
        """Coefficients of degree-0 entries (units) as an integer matrix."""
        M = np.zeros(self.shape, dtype=np.int64)
        for (i, j), v in self.entries.items():
            if self.rows[i] == self.cols[j]:
                M[i, j] = v.constant_term()
        return M

    @property
    def is_minimal(self):
        """No entry has degree 0 (all entries lie in the maximal ideal)."""
        return all(self.rows[i] != self.cols[j] for (i, j) in self.entries)

    # per-degree evaluation ---------------------------------------------------
    def at_degree(self, e):
        hit = self._cache.get(e)
        if hit is not None:
            return hit
        alg = self.algebra
        roff = free_offsets(alg, self.rows, e)
        coff = free_offsets(alg, self.cols, e)
        M = np.zeros((roff[-1], coff[-1]), dtype=np.int64)
        if M.size:
            for (i, j), v in self.entries.items():
                src = e - self.cols[j]
                width = coff[j + 1] - coff[j]
                if width == 0 or roff[i + 1] == roff[i]:
                    continue
                ar = np.arange(width)
                for mono, c in v.terms.items():
                    idx = alg.mult_indices(mono, src)
                    ok = idx >= 0
                    M[roff[i] + idx[ok], coff[j] + ar[ok]] += c
            M %= alg.p
        self._cache[e] = M
        return M

    def to_strings(self):
        return [[str(self[(i, j)]) for j in range(len(self.cols))] for i in range(len(self.rows))]


# coordinates ------------------------------------------------------------------

def column_coords(algebra, degs, e, column):
    """Coordinates in ``F_e`` of a homogeneous column vector of degree ``e``."""
    offs = free_offsets(algebra, degs, e)
    v = np.zeros(offs[-1], dtype=np.int64)
    for i, elem in enumerate(column):
        if elem.is_zero:
            continue
        idx = algebra.index(e - degs[i])
        for mono, c in elem.terms.items():
            if sum(mono) != e - degs[i]:
                raise ValueError(f"component {i} is not of degree {e - degs[i]}")
            v[offs[i] + idx[mono]] = (v[offs[i] + idx[mono]] + c) % algebra.p
    return v


def coords_column(algebra, degs, e, vec):
    """Inverse of :func:`column_coords`."""
    offs = free_offsets(algebra, degs, e)
    terms = [dict() for _ in degs]
    for k in np.flatnonzero(vec):
        i = int(np.searchsorted(offs, k, side="right")) - 1
        mono = algebra.basis(e - degs[i])[k - offs[i]]
        terms[i][mono] = int(vec[k])
    return [RingElement(algebra, t) for t in terms]


def span_at_degree(algebra, degs, columns, col_degs, e):
    """Matrix whose columns span ``(R * columns)_e`` inside ``F_e``."""
    if not columns:
        return np.zeros((free_dim(algebra, degs, e), 0), dtype=np.int64)
    G = GradedMatrix.from_columns(algebra, degs, columns, col_degs)
    return G.at_degree(e)


# submodules, kernels and lifts ----------------------------------------------------

@dataclass
class GeneratorSearch:
    """Outcome of a degree-by-degree generator search."""
    columns: list
    degrees: list
    exact: bool
    top: int


def generators_of(algebra, degs, target, lo, hi, exact, base=None):
    """Minimal homogeneous generators of a graded submodule ``S`` of ``F``.

    ``target(e)`` returns a row basis of ``S_e`` in coordinates of ``F_e``;
    ``base(e)`` (optional) returns columns spanning a submodule ``B_e``
    contained in ``S_e`` that is already accounted for.  New generators are
    chosen in ascending degree as echelon rows of ``S_e`` modulo
    ``B_e + (R * earlier generators)_e``.
    """
    p = algebra.p
    cols: list = []
    cdeg: list = []
    for e in range(lo, hi + 1):
        n = free_dim(algebra, degs, e)
        if n == 0:
            continue
        S = target(e)
        if S.shape[0] == 0:
            continue
        sub = linalg.Subspace(n, p)
        if base is not None:
            B = base(e)
            if B.shape[1]:
                sub.extend(B.T)
        if cols:
            A = span_at_degree(algebra, degs, cols, cdeg, e)
            if A.shape[1]:
                sub.extend(A.T)
        new = sub.extend(S)
        for row in new:
            cols.append(coords_column(algebra, degs, e, row))
            cdeg.append(e)
    return GeneratorSearch(cols, cdeg, exact, hi)


def preimage_generators(A, relations=None, cap=20):
    """Generators of ``{x in F : A x in image(relations)}`` for ``A: F -> G``."""
    alg = A.algebra
    lo, hi, exact = degree_window(alg, A.cols, cap)

    def target(e):
        Ae = A.at_degree(e)
        Re = relations.at_degree(e) if relations is not None and relations.cols else None
        return linalg.preimage(Ae, alg.p, Re)

    return generators_of(alg, A.cols, target, lo, hi, exact)


def kernel_matrix(A, relations=None, cap=20):
    """:class:`GradedMatrix` ``K -> F`` whose columns generate the preimage."""
    res = preimage_generators(A, relations, cap)
    return GradedMatrix.from_columns(A.algebra, A.cols, res.columns, res.degrees), res.exact


def lift_columns(A, columns, col_degs, relations=None):
    """Solve ``A x = v (mod image(relations))`` for each column ``v``.

    Returns the list of solution columns, or ``None`` if some ``v`` does not
    lie in ``image(A) + image(relations)``.
    """
    alg = A.algebra
    out = []
    for col, d in zip(columns, col_degs):
        Ad = A.at_degree(d)
        v = column_coords(alg, A.rows, d, col)
        if relations is not None and relations.cols:
            Ad = np.hstack([Ad, relations.at_degree(d)])
        x = linalg.solve(Ad, v, alg.p)
        if x is None:
            return None
        out.append(coords_column(alg, A.cols, d, x[:free_dim(alg, A.cols, d)]))
    return out


def lift_matrix(A, B, relations=None):
    """Matrix ``X`` with ``A X = B (mod relations)``, or ``None``."""
    cols = lift_columns(A, B.columns(), B.cols, relations)
    if cols is None:
        return None
    return GradedMatrix.from_columns(A.algebra, A.cols, cols, B.cols)


def columns_in_image(B, relations, cap=None):
    """Whether every column of ``B`` lies in the image of ``relations``."""
    alg = B.algebra
    if relations is None or not relations.cols:
        return B.is_zero
    for j, col in enumerate(B.columns()):
        if all(c.is_zero for c in col):
            continue
        d = B.cols[j]
        v = column_coords(alg, B.rows, d, col)
        if linalg.solve(relations.at_degree(d), v, alg.p) is None:
            return False
    return True


# presented modules ---------------------------------------------------------------

class GradedModule:
    """Cokernel of ``relations: F1 -> F0``; free when there are no relations."""

    def __init__(self, algebra, gens, relations=None, name=None):
        self.algebra = algebra
        self.gens = tuple(int(d) for d in gens)
        if relations is None:
            relations = GradedMatrix.zero(algebra, self.gens, ())
        if relations.rows != self.gens:
            raise ValueError("relation rows must match generator degrees")
        self.relations = relations
        self.name = name

    @classmethod
    def free(cls, algebra, gens):
        return cls(algebra, gens)

    @classmethod
    def cyclic(cls, algebra, monomials, degree=0):
        """``R(-degree) / (monomials)``."""
        elems = [algebra.element(m) for m in monomials]
        rel = GradedMatrix(algebra, [degree], [degree + e.degree for e in elems],
                           {(0, j): e for j, e in enumerate(elems)})
        return cls(algebra, [degree], rel)

    @classmethod
    def residue_field(cls, algebra, degree=0):
        return cls.cyclic(algebra, [algebra.var(i) for i in range(algebra.num_vars)], degree)

    @classmethod
    def maximal_ideal(cls, algebra):
        """``m`` presented by its minimal generators (the variables)."""
        n = algebra.num_vars
        row = GradedMatrix(algebra, [0], [1] * n, {(0, i): algebra.var(i) for i in range(n)})
        K, _ = kernel_matrix(row, cap=max(4, (algebra.top_degree or 4) + 2))
        return cls(algebra, [1] * n, K)

    @property
    def rank(self):
        return len(self.gens)

    @property
    def has_relations(self):
        return bool(self.relations.cols) and not self.relations.is_zero

    def __repr__(self):
        return f"GradedModule(gens={self.gens}, relations={len(self.relations.cols)})"

    def dim(self, e):
        n = free_dim(self.algebra, self.gens, e)
        if not self.has_relations or n == 0:
            return n
        return n - linalg.rank(self.relations.at_degree(e), self.algebra.p)

    def window(self, cap):
        return degree_window(self.algebra, self.gens, cap)

    def hilbert_table(self, cap=20):
        lo, hi, _ = self.window(cap)
        return {e: self.dim(e) for e in range(lo, hi + 1) if self.dim(e)}

    def minimal_generator_count(self):
        """``dim_k M / mM``; exact by Nakayama (only degree-0 relation entries matter)."""
        if not self.gens:
            return 0
        return len(self.gens) - linalg.rank(self.relations.scalar_part(), self.algebra.p)

    def is_zero(self):
        return self.minimal_generator_count() == 0

    def shift(self, k):
        return GradedModule(self.algebra, [d + k for d in self.gens], self.relations.shift(k))

    def direct_sum(self, other):
        rel = GradedMatrix.block(self.algebra, {(0, 0): self.relations, (1, 1): other.relations},
                                 [self.gens, other.gens], [self.relations.cols, other.relations.cols])
        return GradedModule(self.algebra, self.gens + other.gens, rel)

    def tensor(self, other):
        """``coker(phi) (x) coker(psi) = coker([phi (x) 1 | 1 (x) psi])``."""
        alg = self.algebra
        a = self.relations.kron(GradedMatrix.identity(alg, other.gens))
        b = GradedMatrix.identity(alg, self.gens).kron(other.relations)
        return GradedModule(alg, a.rows, a.hstack(b))

    def to_json(self):
        return {"generators": list(self.gens),
                "relation_degrees": list(self.relations.cols),
                "relations": self.relations.to_strings()}
