"""Chain complexes of finitely presented graded modules.

A complex stores, for each homological degree ``i`` in a finite range, a
:class:`GradedModule` ``X_i`` and a differential ``d_i: X_i -> X_{i-1}``
given on generators.  Free complexes are the case without relations.
Homology is computed on lifts: with ``F_i`` the free module on the
generators of ``X_i``, the cycles are ``{x in F_i : d x in rel_{i-1}}`` and
the boundaries are ``rel_i + d(F_{i+1})``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .modules import (GradedMatrix, GradedModule, columns_in_image, degree_window,
                      free_dim, generators_of, lift_matrix, preimage_generators)

NEG_INF = -math.inf
POS_INF = math.inf
DEFAULT_CAP = 20


def _lo(*vals):
    vals = [v for v in vals if v is not None]
    return max(vals) if vals else None


def _hi(*vals):
    vals = [v for v in vals if v is not None]
    return min(vals) if vals else None


def _shift(v, k):
    return None if v is None else v + k


class ComplexError(ValueError):
    pass


class ChainComplex:
    """Bounded complex of presented graded modules.

    ``reliable`` is the window of homological degrees in which the stored
    complex agrees in homology with the object it represents (``None`` on a
    side means unbounded).  Truncated resolutions and functors applied to
    them narrow it.
    """

    def __init__(self, algebra, terms, diffs=None, reliable=(None, None), check=True, name=None):
        self.algebra = algebra
        self.terms = {int(i): M for i, M in terms.items() if M.rank}
        self.diffs = {}
        for i, D in (diffs or {}).items():
            i = int(i)
            if i in self.terms and i - 1 in self.terms and not D.is_zero:
                src, tgt = self.terms[i], self.terms[i - 1]
                if D.cols != src.gens or D.rows != tgt.gens:
                    raise ComplexError(f"differential {i} has degrees {D.rows}<-{D.cols}, "
                                       f"expected {tgt.gens}<-{src.gens}")
                self.diffs[i] = D
        self.reliable = tuple(reliable)
        self.name = name
        if check:
            self.validate()

    # construction helpers ----------------------------------------------------------
    @classmethod
    def from_module(cls, M, degree=0):
        return cls(M.algebra, {degree: M})

    @classmethod
    def free(cls, algebra, gens, diffs, **kw):
        return cls(algebra, {i: GradedModule.free(algebra, g) for i, g in gens.items()}, diffs, **kw)

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, {})

    # access -------------------------------------------------------------------------
    @property
    def indices(self):
        return sorted(self.terms)

    @property
    def lo(self):
        return min(self.terms) if self.terms else 0

    @property
    def hi(self):
        return max(self.terms) if self.terms else -1

    @property
    def is_free(self):
        return all(not M.has_relations for M in self.terms.values())

    @property
    def is_zero_complex(self):
        return not self.terms

    def term(self, i):
        M = self.terms.get(i)
        return M if M is not None else GradedModule(self.algebra, ())

    def gens(self, i):
        return self.term(i).gens

    def rel(self, i):
        return self.term(i).relations

    def d(self, i):
        D = self.diffs.get(i)
        if D is None:
            return GradedMatrix.zero(self.algebra, self.gens(i - 1), self.gens(i))
        return D

    def ranks(self):
        return {i: self.terms[i].rank for i in self.indices}

    def __repr__(self):
        body = ", ".join(f"{i}:{self.terms[i].gens}" for i in self.indices)
        return f"ChainComplex({body})"

    def __eq__(self, other):
        if not isinstance(other, ChainComplex) or self.indices != other.indices:
            return False
        for i in self.indices:
            a, b = self.terms[i], other.terms[i]
            if a.gens != b.gens or a.relations != b.relations or self.d(i) != other.d(i):
                return False
        return True

    __hash__ = None

    def validate(self):
        """Check ``d o d = 0`` and that relations map into relations."""
        for i in self.indices:
            if i - 2 in self.terms and i in self.diffs and i - 1 in self.diffs:
                comp = self.d(i - 1) @ self.d(i)
                if not columns_in_image(comp, self.rel(i - 2)):
                    raise ComplexError(f"d_{i - 1} d_{i} != 0")
            M = self.terms[i]
            if M.has_relations and i in self.diffs:
                if not columns_in_image(self.d(i) @ M.relations, self.rel(i - 1)):
                    raise ComplexError(f"d_{i} does not respect the relations of X_{i}")

    def in_window(self, i):
        lo, hi = self.reliable
        return (lo is None or i >= lo) and (hi is None or i <= hi)

    # homology -------------------------------------------------------------------------
    def cycle_space(self, i, e):
        """Row basis of the lifted cycles of ``X_i`` in internal degree ``e``."""
        A = self.d(i).at_degree(e)
        R = self.rel(i - 1).at_degree(e) if self.term(i - 1).has_relations else None
        return linalg.preimage(A, self.algebra.p, R)

    def boundary_matrix(self, i, e):
        """Columns spanning the lifted boundaries ``rel_i + d(F_{i+1})`` at ``e``."""
        parts = []
        if self.term(i).has_relations:
            parts.append(self.rel(i).at_degree(e))
        if i + 1 in self.diffs:
            parts.append(self.d(i + 1).at_degree(e))
        n = free_dim(self.algebra, self.gens(i), e)
        return np.hstack(parts) if parts else np.zeros((n, 0), dtype=np.int64)

    def homology_dim(self, i, e):
        p = self.algebra.p
        n = free_dim(self.algebra, self.gens(i), e)
        if n == 0:
            return 0
        A = self.d(i).at_degree(e)
        if self.term(i - 1).has_relations:
            R = self.rel(i - 1).at_degree(e)
            r = linalg.rank(np.hstack([A, R]), p) - linalg.rank(R, p)
        else:
            r = linalg.rank(A, p)
        return n - r - linalg.rank(self.boundary_matrix(i, e), p)

    def window(self, i, cap=DEFAULT_CAP):
        return degree_window(self.algebra, self.gens(i), cap)

    def homology_record(self, cap=DEFAULT_CAP):
        dims = {}
        exact = True
        for i in self.indices:
            lo, hi, ex = self.window(i, cap)
            exact &= ex
            row = {e: self.homology_dim(i, e) for e in range(lo, hi + 1)}
            row = {e: v for e, v in row.items() if v}
            if row:
                dims[i] = row
        return HomologyRecord(dims, exact, self.reliable)

    def homology_vanishes(self, i, cap=DEFAULT_CAP):
        lo, hi, _ = self.window(i, cap)
        return all(self.homology_dim(i, e) == 0 for e in range(lo, hi + 1))

    def total_homology_dims(self, cap=DEFAULT_CAP):
        rec = self.homology_record(cap)
        return {i: sum(row.values()) for i, row in rec.dims.items()}


@dataclass
class HomologyRecord:
    """k-dimensions of ``H_i`` per internal degree (only nonzero entries kept)."""
    dims: dict
    exact: bool
    reliable: tuple = (None, None)

    def total(self, i):
        return sum(self.dims.get(i, {}).values())

    def nonzero_degrees(self):
        return sorted(self.dims)


# homology modules ------------------------------------------------------------------

def homology(X, i, degree_cap=DEFAULT_CAP):
    """Presentation of ``H_i(X)`` as a graded module.

    Generators are chosen among lifted cycles modulo boundaries; the
    relations are the syzygies of those generators modulo the boundaries.
    """
    alg = X.algebra
    lo, hi, exact = X.window(i, degree_cap)
    search = generators_of(alg, X.gens(i), lambda e: X.cycle_space(i, e), lo, hi, exact,
                           base=lambda e: X.boundary_matrix(i, e))
    G = GradedMatrix.from_columns(alg, X.gens(i), search.columns, search.degrees)
    B = X.term(i).relations
    if i + 1 in X.diffs:
        B = B.hstack(X.d(i + 1))
    K = preimage_generators(G, B, degree_cap)
    rel = GradedMatrix.from_columns(alg, search.degrees, K.columns, K.degrees)
    H = GradedModule(alg, search.degrees, rel, name=f"H_{i}")
    H.exact = exact and K.exact
    H.cycle_generators = G
    return H


def sup_inf(X, degree_cap=DEFAULT_CAP):
    """``(sup, inf)`` of the homology; ``(-inf, +inf)`` for an exact complex.

    Only degrees inside ``X.reliable`` are inspected.
    """
    nz = [i for i in X.indices if X.in_window(i) and not X.homology_vanishes(i, degree_cap)]
    if not nz:
        return NEG_INF, POS_INF
    return max(nz), min(nz)


def is_exact(X, degree_cap=DEFAULT_CAP):
    return sup_inf(X, degree_cap) == (NEG_INF, POS_INF)


# morphisms -------------------------------------------------------------------------

class ComplexMorphism:
    """Family of maps ``sigma_i: X_i -> Y_i`` on generators commuting with ``d``."""

    def __init__(self, source, target, maps=None, check=True):
        self.source = source
        self.target = target
        self.maps = {}
        for i, S in (maps or {}).items():
            i = int(i)
            if i in source.terms and i in target.terms and not S.is_zero:
                if S.cols != source.gens(i) or S.rows != target.gens(i):
                    raise ComplexError(f"component {i} has wrong degrees")
                self.maps[i] = S
        if check:
            self.validate()

    def __getitem__(self, i):
        S = self.maps.get(i)
        if S is None:
            return GradedMatrix.zero(self.source.algebra, self.target.gens(i), self.source.gens(i))
        return S

    def validate(self):
        X, Y = self.source, self.target
        for i in sorted(set(X.indices) | set(Y.indices)):
            lhs = Y.d(i) @ self[i]
            rhs = self[i - 1] @ X.d(i)
            if not columns_in_image(lhs - rhs, Y.rel(i - 1)):
                raise ComplexError(f"morphism does not commute with d in degree {i}")
            if X.term(i).has_relations and not columns_in_image(self[i] @ X.rel(i), Y.rel(i)):
                raise ComplexError(f"morphism does not respect relations in degree {i}")

    @classmethod
    def identity(cls, X):
        return cls(X, X, {i: GradedMatrix.identity(X.algebra, X.gens(i)) for i in X.indices}, check=False)

    @classmethod
    def zero(cls, X, Y):
        return cls(X, Y, {}, check=False)

    def __matmul__(self, other):
        """Composition ``self o other``."""
        maps = {i: self[i] @ other[i] for i in other.source.indices if i in self.target.terms}
        return ComplexMorphism(other.source, self.target, maps)

    def scale(self, c):
        return ComplexMorphism(self.source, self.target, {i: S.scale(c) for i, S in self.maps.items()},
                               check=False)

    def __add__(self, other):
        idx = set(self.maps) | set(other.maps)
        return ComplexMorphism(self.source, self.target, {i: self[i] + other[i] for i in idx})

    def is_surjective_at(self, i, e):
        """Whether ``sigma_i`` is onto ``(Y_i)_e``."""
        Y = self.target
        p = Y.algebra.p
        n = free_dim(Y.algebra, Y.gens(i), e)
        if n == 0:
            return True
        S = self[i].at_degree(e)
        if Y.term(i).has_relations:
            R = Y.rel(i).at_degree(e)
            return linalg.rank(np.hstack([S, R]), p) == n
        return linalg.rank(S, p) == n

    def is_degreewise_surjective(self, degree_cap=DEFAULT_CAP):
        for i in self.target.indices:
            lo, hi, _ = self.target.window(i, degree_cap)
            if not all(self.is_surjective_at(i, e) for e in range(lo, hi + 1)):
                return False
        return True


@dataclass
class QuasiIsoCertificate:
    """Per (homological, internal) degree: dims of both homologies and the induced rank.

    ``verdict`` is ``True``/``False`` or ``None`` when indeterminate.
    """
    verdict: bool | None
    exact: bool
    table: dict = field(default_factory=dict)
    reason: str = ""

    def __bool__(self):
        if self.verdict is None:
            raise ValueError(f"indeterminate quasi-isomorphism check: {self.reason}")
        return self.verdict


def induced_rank(sigma, i, e):
    X, Y = sigma.source, sigma.target
    p = X.algebra.p
    Z = X.cycle_space(i, e)
    B = Y.boundary_matrix(i, e)
    if Z.shape[0] == 0:
        return 0
    img = linalg.matmul(sigma[i].at_degree(e), Z.T, p)
    return linalg.rank(np.hstack([img, B]), p) - linalg.rank(B, p)


def is_quasiiso(sigma, degree_cap=DEFAULT_CAP):
    """Decide whether ``H(sigma)`` is bijective in every degree within the windows."""
    X, Y = sigma.source, sigma.target
    lo = _lo(X.reliable[0], Y.reliable[0])
    hi = _hi(X.reliable[1], Y.reliable[1])
    table = {}
    exact = True
    idx = sorted(set(X.indices) | set(Y.indices))
    for i in idx:
        if (lo is not None and i < lo) or (hi is not None and i > hi):
            continue
        gens = X.gens(i) + Y.gens(i)
        a, b, ex = degree_window(X.algebra, gens, degree_cap)
        exact &= ex
        if not ex and gens and degree_cap < max(gens):
            return QuasiIsoCertificate(None, False, table, f"degree cap {degree_cap} below generators")
        for e in range(a, b + 1):
            hx, hy = X.homology_dim(i, e), Y.homology_dim(i, e)
            r = induced_rank(sigma, i, e) if hx and hy else 0
            if hx or hy:
                table[(i, e)] = (hx, hy, r)
            if not (hx == hy == r):
                return QuasiIsoCertificate(False, exact, table, f"H_{i} differs in internal degree {e}")
    return QuasiIsoCertificate(True, exact, table)


# constructions -------------------------------------------------------------------

def suspend(X, n):
    """``(S^n X)_m = X_{m-n}`` with differential ``(-1)^n d``."""
    sign = -1 if n % 2 else 1
    terms = {i + n: M for i, M in X.terms.items()}
    diffs = {i + n: D.scale(sign) for i, D in X.diffs.items()}
    rel = (_shift(X.reliable[0], n), _shift(X.reliable[1], n))
    return ChainComplex(X.algebra, terms, diffs, rel, check=False)


def suspend_morphism(sigma, n):
    sign = -1 if n % 2 else 1
    return ComplexMorphism(suspend(sigma.source, n), suspend(sigma.target, n),
                           {i + n: S for i, S in sigma.maps.items()}, check=False)


def cokernel_module(X, n):
    """``C_n = coker(d_{n+1}: X_{n+1} -> X_n)`` as a presented module."""
    M = X.term(n)
    rel = M.relations
    if n + 1 in X.diffs:
        rel = rel.hstack(X.d(n + 1))
    return GradedModule(X.algebra, M.gens, rel, name=f"C_{n}")


def cycle_module(X, n, degree_cap=DEFAULT_CAP):
    """``Z_n = ker(d_n)`` presented, with the inclusion matrix into ``X_n``."""
    alg = X.algebra
    lo, hi, exact = X.window(n, degree_cap)
    base = (lambda e: X.rel(n).at_degree(e)) if X.term(n).has_relations else None
    search = generators_of(alg, X.gens(n), lambda e: X.cycle_space(n, e), lo, hi, exact, base=base)
    G = GradedMatrix.from_columns(alg, X.gens(n), search.columns, search.degrees)
    K = preimage_generators(G, X.rel(n) if X.term(n).has_relations else None, degree_cap)
    rel = GradedMatrix.from_columns(alg, search.degrees, K.columns, K.degrees)
    return GradedModule(alg, search.degrees, rel, name=f"Z_{n}"), G


TRUNCATION_MODES = ("soft_left", "soft_right", "hard_left", "hard_right")


def truncate(X, n, mode, degree_cap=DEFAULT_CAP):
    """Soft/hard truncations.

    ``soft_left``: tau_{<=n} with ``C_n`` in degree n; ``soft_right``:
    tau_{>=n} with ``Z_n`` in degree n; ``hard_left``: X_{<=n};
    ``hard_right``: X_{>=n}.
    """
    if mode == "hard_left":
        return _hard_left(X, n)
    sigma = truncation_map(X, n, mode, degree_cap)
    return sigma.target if mode == "soft_left" else sigma.source


def _hard_left(X, n):
    terms = {i: M for i, M in X.terms.items() if i <= n}
    diffs = {i: D for i, D in X.diffs.items() if i <= n}
    return ChainComplex(X.algebra, terms, diffs, check=False)


def truncation_map(X, n, mode, degree_cap=DEFAULT_CAP):
    """Natural morphism attached to a truncation.

    ``soft_left``: X -> tau_{<=n}(X); ``soft_right``: tau_{>=n}(X) -> X;
    ``hard_right``: X_{>=n} -> X;  ``hard_left``: X_{<=n} -> X (inclusion of
    the subcomplex).
    """
    alg = X.algebra
    if mode == "soft_left":
        terms = {i: M for i, M in X.terms.items() if i < n}
        terms[n] = cokernel_module(X, n)
        diffs = {i: D for i, D in X.diffs.items() if i <= n}
        T = ChainComplex(alg, terms, diffs, check=False)
        maps = {i: GradedMatrix.identity(alg, X.gens(i)) for i in X.indices if i <= n}
        return ComplexMorphism(X, T, maps, check=False)
    if mode == "soft_right":
        Z, G = cycle_module(X, n, degree_cap)
        terms = {i: M for i, M in X.terms.items() if i > n}
        terms[n] = Z
        diffs = {i: D for i, D in X.diffs.items() if i > n + 1}
        if n + 1 in X.diffs:
            lifted = lift_matrix(G, X.d(n + 1), X.rel(n) if X.term(n).has_relations else None)
            if lifted is None:
                raise ComplexError("boundaries do not lie in the cycles")
            diffs[n + 1] = lifted
        T = ChainComplex(alg, terms, diffs, check=False)
        maps = {i: GradedMatrix.identity(alg, X.gens(i)) for i in X.indices if i > n}
        maps[n] = G
        return ComplexMorphism(T, X, maps, check=False)
    if mode == "hard_right":
        terms = {i: M for i, M in X.terms.items() if i >= n}
        diffs = {i: D for i, D in X.diffs.items() if i > n}
        T = ChainComplex(alg, terms, diffs, check=False)
        return ComplexMorphism(T, X, {i: GradedMatrix.identity(alg, X.gens(i)) for i in T.indices},
                               check=False)
    if mode == "hard_left":
        T = _hard_left(X, n)
        return ComplexMorphism(T, X, {i: GradedMatrix.identity(alg, X.gens(i)) for i in T.indices},
                               check=False)
    raise ValueError(f"unknown truncation mode {mode!r}")


def hard_truncation_to_cokernel(X, n):
    """The morphism ``X_{>=n} -> S^n C_n``."""
    alg = X.algebra
    src = truncate(X, n, "hard_right")
    tgt = ChainComplex.from_module(cokernel_module(X, n), n)
    maps = {n: GradedMatrix.identity(alg, X.gens(n))} if n in X.terms else {}
    return ComplexMorphism(src, tgt, maps)


def cone(sigma):
    """Mapping cone: ``V_i = Y_i (+) X_{i-1}``, ``d(y, x) = (d y + sigma x, -d x)``."""
    X, Y = sigma.source, sigma.target
    alg = X.algebra
    idx = sorted(set(Y.indices) | {i + 1 for i in X.indices})
    terms, diffs = {}, {}
    for i in idx:
        terms[i] = Y.term(i).direct_sum(X.term(i - 1))
    for i in idx:
        if i - 1 not in terms:
            continue
        blocks = {(0, 0): Y.d(i), (0, 1): sigma[i - 1], (1, 1): -X.d(i - 1)}
        diffs[i] = GradedMatrix.block(alg, blocks, [Y.gens(i - 1), X.gens(i - 2)],
                                      [Y.gens(i), X.gens(i - 1)])
    rel = (_lo(Y.reliable[0], _shift(X.reliable[0], 1)), _hi(Y.reliable[1], _shift(X.reliable[1], 1)))
    return ChainComplex(alg, terms, diffs, rel)


def cone_inclusion(sigma, V=None):
    """The inclusion ``Y -> Cone(sigma)``."""
    V = V or cone(sigma)
    alg = V.algebra
    Y, X = sigma.target, sigma.source
    maps = {}
    for i in Y.indices:
        top = GradedMatrix.identity(alg, Y.gens(i))
        maps[i] = top.vstack(GradedMatrix.zero(alg, X.gens(i - 1), Y.gens(i)))
    return ComplexMorphism(Y, V, maps)


def cone_projection(sigma, V=None):
    """The projection ``Cone(sigma) -> S X``."""
    V = V or cone(sigma)
    alg = V.algebra
    Y, X = sigma.target, sigma.source
    SX = suspend(X, 1)
    maps = {}
    for i in SX.indices:
        maps[i] = GradedMatrix.zero(alg, X.gens(i - 1), Y.gens(i)).hstack(
            GradedMatrix.identity(alg, X.gens(i - 1)))
    return ComplexMorphism(V, SX, maps)


def direct_sum(X, Y):
    alg = X.algebra
    idx = sorted(set(X.indices) | set(Y.indices))
    terms = {i: X.term(i).direct_sum(Y.term(i)) for i in idx}
    diffs = {}
    for i in idx:
        diffs[i] = GradedMatrix.block(alg, {(0, 0): X.d(i), (1, 1): Y.d(i)},
                                      [X.gens(i - 1), Y.gens(i - 1)], [X.gens(i), Y.gens(i)])
    rel = (_lo(X.reliable[0], Y.reliable[0]), _hi(X.reliable[1], Y.reliable[1]))
    return ChainComplex(alg, terms, diffs, rel, check=False)


def tensor_complexes(X, Y):
    """Total complex of ``X (x) Y`` with ``d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy``.

    Terms may carry relations; the tensor of presentations is used.
    """
    alg = X.algebra
    pairs: dict[int, list] = {}
    for i in X.indices:
        for j in Y.indices:
            pairs.setdefault(i + j, []).append((i, j))
    terms, layout = {}, {}
    for n, ps in pairs.items():
        mods = [X.term(i).tensor(Y.term(j)) for i, j in ps]
        M = mods[0]
        for extra in mods[1:]:
            M = M.direct_sum(extra)
        terms[n] = M
        layout[n] = (ps, [m.gens for m in mods])
    diffs = {}
    for n in pairs:
        if n - 1 not in pairs:
            continue
        src_ps, src_g = layout[n]
        tgt_ps, tgt_g = layout[n - 1]
        tpos = {ij: k for k, ij in enumerate(tgt_ps)}
        blocks = {}
        for k, (i, j) in enumerate(src_ps):
            if (i - 1, j) in tpos and i in X.diffs:
                blocks[(tpos[(i - 1, j)], k)] = X.d(i).kron(GradedMatrix.identity(alg, Y.gens(j)))
            if (i, j - 1) in tpos and j in Y.diffs:
                M = GradedMatrix.identity(alg, X.gens(i)).kron(Y.d(j))
                blocks[(tpos[(i, j - 1)], k)] = M.scale(-1) if i % 2 else M
        diffs[n] = GradedMatrix.block(alg, blocks, tgt_g, src_g)
    rel = _tensor_reliable(X, Y)
    return ChainComplex(alg, terms, diffs, rel)


def _tensor_reliable(X, Y):
    hi = None
    # a truncation of X above h spoils (X (x) Y)_n for n > h + lo(Y)
    if X.reliable[1] is not None:
        hi = X.reliable[1] + (Y.lo if Y.terms else 0)
    if Y.reliable[1] is not None:
        cand = Y.reliable[1] + (X.lo if X.terms else 0)
        hi = cand if hi is None else min(hi, cand)
    return (None, hi)


def tensor_with_module(X, M):
    return tensor_complexes(X, ChainComplex.from_module(M))


def _hom_free(alg, F, G):
    """Generator degrees of ``Hom(F, G)`` indexed ``k * len(F) + l``."""
    return [b - a for b in G for a in F]


def hom_complex(X, Y):
    """``Hom(X, Y)_n = (+)_i Hom(X_i, Y_{i+n})`` with
    ``(d f)_i = d^Y f_i - (-1)^n f_{i-1} d^X_i``.  ``X`` must be free.
    """
    if not X.is_free:
        raise ComplexError("hom_complex needs a free source complex")
    alg = X.algebra
    pairs: dict[int, list] = {}
    for i in X.indices:
        for j in Y.indices:
            pairs.setdefault(j - i, []).append(i)
    terms, layout = {}, {}
    for n, comps in pairs.items():
        mods = []
        for i in comps:
            Fdual = GradedMatrix.identity(alg, [-a for a in X.gens(i)])
            rel = Y.rel(i + n).kron(Fdual)
            mods.append(GradedModule(alg, rel.rows, rel))
        M = mods[0]
        for extra in mods[1:]:
            M = M.direct_sum(extra)
        terms[n] = M
        layout[n] = (comps, [m.gens for m in mods])
    diffs = {}
    for n, (comps, src_g) in layout.items():
        if n - 1 not in layout:
            continue
        tcomps, tgt_g = layout[n - 1]
        tpos = {i: k for k, i in enumerate(tcomps)}
        blocks = {}
        sign = -1 if n % 2 == 0 else 1  # -(-1)^n
        for k, i in enumerate(comps):
            # post-composition: component i of Hom_n -> component i of Hom_{n-1}
            if i in tpos and (i + n) in Y.diffs:
                Fdual = GradedMatrix.identity(alg, [-a for a in X.gens(i)])
                blocks[(tpos[i], k)] = Y.d(i + n).kron(Fdual)
            # pre-composition with d^X_{i+1}: component i -> component i+1
            if (i + 1) in tpos and (i + 1) in X.diffs:
                M = GradedMatrix.identity(alg, Y.gens(i + n)).kron(X.d(i + 1).transpose())
                M = M.scale(sign)
                key = (tpos[i + 1], k)
                blocks[key] = blocks[key] + M if key in blocks else M
        diffs[n] = GradedMatrix.block(alg, blocks, tgt_g, src_g)
    lo = None
    if X.reliable[1] is not None:
        lo = (Y.hi if Y.terms else 0) - X.reliable[1] + 1
    hi = None
    if X.reliable[0] is not None:
        hi = (Y.lo if Y.terms else 0) - X.reliable[0]
    return ChainComplex(alg, terms, diffs, (lo, hi))


# text interchange ------------------------------------------------------------------

def complex_to_json(X):
    out = {"terms": [], "differentials": []}
    for i in X.indices:
        M = X.terms[i]
        t = {"degree": i, "generators": list(M.gens)}
        if M.has_relations:
            t["relation_degrees"] = list(M.relations.cols)
            t["relations"] = M.relations.to_strings()
        out["terms"].append(t)
    for i in sorted(X.diffs):
        out["differentials"].append({"degree": i, "matrix": X.d(i).to_strings()})
    return out


def _matrix_from_strings(alg, rows, cols, data, where):
    from .ring import ParseError, parse_polynomial
    if len(data) != len(rows) or any(len(r) != len(cols) for r in data):
        raise ParseError(f"matrix shape does not match {len(rows)}x{len(cols)}", source=where)
    ent = {}
    for i, row in enumerate(data):
        for j, s in enumerate(row):
            v = parse_polynomial(str(s), alg, source=f"{where} entry ({i},{j})")
            if not v.is_zero:
                ent[(i, j)] = v
    try:
        return GradedMatrix(alg, rows, cols, ent)
    except ValueError as exc:
        raise ParseError(str(exc), source=where) from None


def complex_from_json(alg, data, source="complex"):
    from .ring import ParseError
    if "generators" in data and "terms" not in data:
        return ChainComplex.from_module(module_from_json(alg, data, source), data.get("degree", 0))
    try:
        terms = {}
        for t in data["terms"]:
            i = int(t["degree"])
            gens = [int(g) for g in t["generators"]]
            rel = None
            if t.get("relations") is not None:
                rel = _matrix_from_strings(alg, gens, t.get("relation_degrees", []), t["relations"],
                                           f"{source} term {i} relations")
            terms[i] = GradedModule(alg, gens, rel)
        diffs = {}
        for dd in data.get("differentials", []):
            i = int(dd["degree"])
            if i not in terms or i - 1 not in terms:
                raise ParseError(f"differential {i} between missing terms", source=source)
            diffs[i] = _matrix_from_strings(alg, terms[i - 1].gens, terms[i].gens, dd["matrix"],
                                            f"{source} differential {i}")
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed complex: missing or bad field {exc}", source=source) from None
    try:
        return ChainComplex(alg, terms, diffs)
    except ComplexError as exc:
        raise ParseError(str(exc), source=source) from None


def module_from_json(alg, data, source="module"):
    gens = [int(g) for g in data["generators"]]
    rel = None
    if data.get("relations") is not None:
        rel = _matrix_from_strings(alg, gens, data.get("relation_degrees", []), data["relations"],
                                   f"{source} relations")
    return GradedModule(alg, gens, rel)
