"""Betti numbers, Poincare series, complexity, Koszul complexes and depth."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .complexes import (DEFAULT_CAP, NEG_INF, POS_INF, ChainComplex, hom_complex, sup_inf,
                        tensor_complexes)
from .modules import GradedMatrix, GradedModule
from .resolution import DEFAULT_CUTOFF, as_complex, minimal_free_resolution


# derived functors --------------------------------------------------------------------

def derived_tensor(X, Y, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP, resolution=None):
    """``P (x) Y`` with ``P`` the minimal resolution of ``X``."""
    res = resolution or minimal_free_resolution(X, cutoff, degree_cap)
    return tensor_complexes(res.complex, as_complex(Y))


def derived_hom(X, Y, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP, resolution=None):
    """``Hom(P, Y)`` with ``P`` the minimal resolution of ``X``; ``H_{-i}`` is ``Ext^i``."""
    res = resolution or minimal_free_resolution(X, cutoff, degree_cap)
    return hom_complex(res.complex, as_complex(Y))


def ext_dims(M, N, top, degree_cap=DEFAULT_CAP):
    """``{i: dim_k Ext^i(M, N)}`` for ``0 <= i <= top``."""
    H = derived_hom(M, N, top + 1, degree_cap)
    return {i: sum(H.homology_record(degree_cap).dims.get(-i, {}).values()) for i in range(top + 1)}


def tor_betti(X, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP):
    """Betti numbers as ``dim H_n(X (x) P^k)``, resolving the residue field instead of ``X``."""
    X = as_complex(X)
    alg = X.algebra
    Pk = minimal_free_resolution(GradedModule.residue_field(alg), cutoff, degree_cap).complex
    T = tensor_complexes(X, Pk)
    top = cutoff + (X.lo if X.terms else 0)
    out = {}
    for n in range(X.lo if X.terms else 0, min(top, cutoff) + 1):
        lo, hi, _ = T.window(n, degree_cap)
        out[n] = sum(T.homology_dim(n, e) for e in range(lo, hi + 1))
    return out


# Poincare series ---------------------------------------------------------------------

@dataclass
class PoincareData:
    """Truncated Laurent series ``sum_n beta_n t^n`` starting at ``t^base``."""
    base: int
    coefficients: list
    cutoff: int
    complete: bool = False

    def coefficient(self, n):
        k = n - self.base
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        if k >= len(self.coefficients) and not self.complete and n <= self.cutoff:
            raise IndexError(n)
        return 0

    def as_dict(self):
        return {self.base + k: c for k, c in enumerate(self.coefficients)}

    @property
    def is_zero(self):
        return not any(self.coefficients)

    def __mul__(self, other):
        if self.is_zero or other.is_zero:
            return PoincareData(0, [], min(self.cutoff, other.cutoff), True)
        base = self.base + other.base
        top = min(self.cutoff + other.base, other.cutoff + self.base)
        if self.complete and other.complete:
            top = self.base + len(self.coefficients) + other.base + len(other.coefficients) - 2
        coeffs = []
        for n in range(base, top + 1):
            coeffs.append(sum(self.coefficient(i) * other.coefficient(n - i)
                              for i in range(self.base, n - other.base + 1)))
        return PoincareData(base, coeffs, top, self.complete and other.complete)

    def __str__(self):
        parts = [f"{c}t^{self.base + k}" for k, c in enumerate(self.coefficients) if c]
        tail = "" if self.complete else " + ..."
        return (" + ".join(parts) or "0") + tail


def poincare_series(X, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP, resolution=None):
    res = resolution or minimal_free_resolution(X, cutoff, degree_cap)
    P = res.complex
    if not P.terms:
        return PoincareData(0, [], res.cutoff, True)
    top = P.hi if res.complete else res.cutoff
    return PoincareData(P.lo, [res.rank(n) for n in range(P.lo, top + 1)], res.cutoff, res.complete)


@dataclass
class ProductCheck:
    holds: bool
    table: dict
    cutoff: int


def poincare_product_check(X, Y, cutoff=8, degree_cap=DEFAULT_CAP):
    """Compare Betti numbers of ``X (x)^L Y`` with the product of the two series.

    ``X (x)^L Y`` is computed as ``P^X (x) Y`` and then resolved again, so the
    left side never uses the Betti numbers of ``Y``.
    """
    X, Y = as_complex(X), as_complex(Y)
    rx = minimal_free_resolution(X, cutoff + 1, degree_cap)
    D = tensor_complexes(rx.complex, Y)
    rd = minimal_free_resolution(D, cutoff, degree_cap)
    left = poincare_series(D, cutoff, resolution=rd)
    prod = poincare_series(X, resolution=rx) * poincare_series(Y, cutoff, degree_cap)
    top = cutoff
    if D.reliable[1] is not None:
        top = min(top, D.reliable[1])
    table = {}
    ok = True
    for n in range(min(left.base, prod.base) if not left.is_zero else prod.base, top + 1):
        a, b = left.coefficient(n), prod.coefficient(n)
        table[n] = (a, b)
        ok &= a == b
    return ProductCheck(ok, table, top)


# complexity --------------------------------------------------------------------------

@dataclass
class ComplexityVerdict:
    kind: str  # "exactly", "at least" or "superpolynomial-evidence"
    value: int | None
    fitted_degree: int | None
    window: tuple
    diagnostics: dict = field(default_factory=dict)

    @property
    def finite(self):
        """True for a certified finite value, False for superpolynomial evidence, else None."""
        if self.kind == "exactly":
            return True
        if self.kind == "superpolynomial-evidence":
            return False
        return None

    def __str__(self):
        if self.kind == "superpolynomial-evidence":
            return self.kind
        return f"{self.kind} {self.value}"


RATIO_DELTA = 0.1


def complexity_estimate(data, delta=RATIO_DELTA):
    """Growth verdict for the Betti numbers in ``data``.

    Finite projective dimension gives exactly 0.  Otherwise the last half of
    the coefficients (at least four) is tested first for polynomial growth by
    finite differences, then for persistent ratio ``>= 1 + delta``.
    """
    if data.complete:
        return ComplexityVerdict("exactly", 0, None, (), {"reason": "finite projective dimension"})
    beta = list(data.coefficients)
    n = len(beta)
    start = n // 2
    win = beta[start:]
    if len(win) < 4:
        raise ValueError(f"window too small: {len(win)} coefficients, need at least 4")
    idx = (data.base + start, data.base + n - 1)
    diffs = np.array(win, dtype=object)
    for d in range(len(win) - 1):
        nxt = diffs[1:] - diffs[:-1]
        if len(nxt) >= 2 and all(v == 0 for v in nxt):
            return ComplexityVerdict("exactly", d + 1, d, idx, {"finite_differences": d + 1})
        diffs = nxt
    ratios = [win[i + 1] / win[i] for i in range(len(win) - 1) if win[i]]
    if ratios and len(ratios) == len(win) - 1 and all(r >= 1 + delta for r in ratios):
        return ComplexityVerdict("superpolynomial-evidence", None, None, idx,
                                 {"min_ratio": min(ratios)})
    pts = [(math.log(data.base + start + i), math.log(b)) for i, b in enumerate(win)
           if b > 0 and data.base + start + i > 0]
    slope = 0.0
    if len(pts) >= 2:
        xs, ys = np.array(pts).T
        slope = float(np.polyfit(xs, ys, 1)[0])
    c = max(1, int(math.floor(slope + 1e-9)) + 1)
    return ComplexityVerdict("at least", c, None, idx, {"loglog_slope": slope})


# Koszul complexes and depth ---------------------------------------------------------

@dataclass
class KoszulData:
    sequence: list
    length: int
    complex: ChainComplex


def koszul_complex(algebra, sequence=None):
    """Exterior-algebra complex on a homogeneous sequence (default: the variables)."""
    if sequence is None:
        seq = [algebra.var(i) for i in range(algebra.num_vars)]
    else:
        seq = [algebra.element(f) for f in sequence]
    for f in seq:
        if f.is_zero or not f.is_homogeneous:
            raise ValueError(f"Koszul sequence entry {f} is not a nonzero homogeneous element")
    degs = [f.degree for f in seq]
    n = len(seq)
    subsets = {i: list(combinations(range(n), i)) for i in range(n + 1)}
    gens = {i: [sum(degs[j] for j in S) for S in subsets[i]] for i in subsets}
    diffs = {}
    for i in range(1, n + 1):
        pos = {S: k for k, S in enumerate(subsets[i - 1])}
        ent = {}
        for c, S in enumerate(subsets[i]):
            for t, j in enumerate(S):
                f = seq[j] if t % 2 == 0 else -seq[j]
                ent[(pos[S[:t] + S[t + 1:]], c)] = f
        diffs[i] = GradedMatrix(algebra, gens[i - 1], gens[i], ent)
    K = ChainComplex.free(algebra, gens, diffs)
    return KoszulData(seq, n, K)


def depth(X, degree_cap=DEFAULT_CAP, sequence=None):
    """``n - sup(X (x) K)`` for the Koszul complex ``K`` on ``n`` generators of ``m``."""
    X = as_complex(X)
    kd = koszul_complex(X.algebra, sequence)
    s, _ = sup_inf(tensor_complexes(X, kd.complex), degree_cap)
    if s == NEG_INF:
        return POS_INF
    return kd.length - s


def ring_depth(algebra, degree_cap=DEFAULT_CAP):
    return depth(GradedModule.free(algebra, [0]), degree_cap)
