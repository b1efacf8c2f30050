"""Free resolutions of complexes: minimal, strict (surjective) and of short exact sequences.

The minimal resolution is built as a minimal semifree model: at step ``n``
the homology ``H_n`` of ``Cone(sigma: P_{<n} -> X)`` is killed by adding
free generators to ``P_n``.  A generator attached to a cycle ``(x, q)`` of
the cone gets ``sigma(g) = x`` and ``d g = -q``.  Choosing generators
minimally modulo boundaries keeps every differential entry in ``m``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .complexes import (DEFAULT_CAP, NEG_INF, ChainComplex, ComplexError, ComplexMorphism,
                        cokernel_module, is_quasiiso)
from .modules import (GradedMatrix, GradedModule, coords_column, degree_window, free_dim,
                      generators_of, kernel_matrix, lift_columns, lift_matrix)

DEFAULT_CUTOFF = 10


def as_complex(X):
    return ChainComplex.from_module(X) if isinstance(X, GradedModule) else X


@dataclass
class ResolutionResult:
    """A free complex ``P`` with a quasi-isomorphism ``sigma: P -> X`` (up to ``cutoff``)."""
    complex: ChainComplex
    sigma: ComplexMorphism
    cutoff: int
    complete: bool
    exact: bool
    minimal: bool

    @property
    def source(self):
        return self.sigma.target

    def rank(self, n):
        return len(self.complex.gens(n))

    @property
    def betti(self):
        """``{n: beta_n}`` for every computed homological degree."""
        lo = self.complex.lo if self.complex.terms else self.cutoff
        top = self.complex.hi if self.complete else self.cutoff
        return {n: self.rank(n) for n in range(min(lo, top), top + 1)} if self.complex.terms else {}

    def betti_list(self, start=0):
        return [self.rank(n) for n in range(start, self.cutoff + 1)]

    @property
    def graded_betti(self):
        return {n: dict(sorted(Counter(self.complex.gens(n)).items())) for n in self.complex.indices}

    @property
    def pd_value(self):
        if not self.complete:
            return None
        return self.complex.hi if self.complex.terms else NEG_INF

    def betti_table(self):
        """Text table: rows are homological degrees, columns internal degrees."""
        gb = self.graded_betti
        degs = sorted({d for row in gb.values() for d in row})
        head = "n\\e " + " ".join(f"{d:>5}" for d in degs)
        lines = [head]
        for n in sorted(gb):
            lines.append(f"{n:>3} " + " ".join(f"{gb[n].get(d, 0) or '.':>5}" for d in degs))
        return "\n".join(lines)

    def to_json(self):
        return {"betti": {str(n): b for n, b in self.betti.items()},
                "graded_betti": {str(n): {str(d): c for d, c in row.items()}
                                 for n, row in self.graded_betti.items()},
                "cutoff": self.cutoff, "complete": self.complete,
                "certified_exact": self.exact, "minimal": self.minimal}


def _zero(alg, rows, cols):
    return GradedMatrix.zero(alg, rows, cols)


def minimal_free_resolution(X, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP):
    """Minimal free resolution of a complex or module through homological degree ``cutoff``."""
    X = as_complex(X)
    alg = X.algebra
    p = alg.p
    gens: dict[int, list] = {}
    dP: dict[int, GradedMatrix] = {}
    sig: dict[int, GradedMatrix] = {}
    exact = True
    complete = X.is_zero_complex
    n = X.lo
    while not complete and n <= cutoff:
        xg = X.gens(n)
        prev, prev2 = tuple(gens.get(n - 1, ())), tuple(gens.get(n - 2, ()))
        rows, cols = [X.gens(n - 1), prev2], [xg, prev]
        blocks = {(0, 0): X.d(n)}
        if prev:
            blocks[(0, 1)] = sig.get(n - 1, _zero(alg, X.gens(n - 1), prev))
            blocks[(1, 1)] = -dP.get(n - 1, _zero(alg, prev2, prev))
        D = GradedMatrix.block(alg, blocks, rows, cols)
        relX = X.rel(n - 1)
        Rel = GradedMatrix.block(alg, {(0, 0): relX}, rows, [relX.cols]) if relX.cols else None
        base_parts = X.rel(n)
        if n + 1 in X.diffs:
            base_parts = base_parts.hstack(X.d(n + 1))
        B = GradedMatrix.block(alg, {(0, 0): base_parts}, cols, [base_parts.cols]) \
            if base_parts.cols else None
        flat = list(xg) + list(prev)
        lo, hi, ex = degree_window(alg, flat, degree_cap)
        exact &= ex

        def target(e, D=D, Rel=Rel):
            return linalg.preimage(D.at_degree(e), p, Rel.at_degree(e) if Rel is not None else None)

        base = (lambda e, B=B: B.at_degree(e)) if B is not None else None
        found = generators_of(alg, flat, target, lo, hi, ex, base=base)
        k = len(xg)
        gens[n] = list(found.degrees)
        if found.degrees:
            xs = [c[:k] for c in found.columns]
            qs = [[-v for v in c[k:]] for c in found.columns]
            sig[n] = GradedMatrix.from_columns(alg, xg, xs, found.degrees)
            if prev:
                dP[n] = GradedMatrix.from_columns(alg, prev, qs, found.degrees)
        elif n >= X.hi:
            complete = True
        n += 1
    P = ChainComplex.free(alg, {i: g for i, g in gens.items() if g}, dP,
                          reliable=(None, None) if complete else (None, cutoff - 1), check=False)
    sigma = ComplexMorphism(P, X, sig, check=False)
    minimal = all(D.is_minimal for D in P.diffs.values())
    return ResolutionResult(P, sigma, cutoff, complete, exact, minimal)


def betti_numbers(X, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP):
    return minimal_free_resolution(X, cutoff, degree_cap).betti


@dataclass
class PdVerdict:
    """Projective dimension: an integer, ``-inf``, or a lower bound ``>= cutoff``."""
    value: float | int | None
    lower_bound: int | None
    exact: bool
    betti: dict = field(default_factory=dict)

    @property
    def determinate(self):
        return self.value is not None

    def __str__(self):
        if self.value is None:
            return f">= {self.lower_bound}"
        return "-inf" if self.value == NEG_INF else str(self.value)


def projective_dimension(X, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP, resolution=None):
    res = resolution or minimal_free_resolution(X, cutoff, degree_cap)
    if res.complete:
        return PdVerdict(res.pd_value, None, res.exact, res.betti)
    return PdVerdict(None, res.cutoff, res.exact, res.betti)


@dataclass
class SyzygyModule:
    index: int
    module: GradedModule


def syzygy(res, n):
    """``C_n = coker(d_{n+1})`` of the resolution."""
    if n > res.cutoff - 1 and not res.complete:
        raise ValueError(f"syzygy {n} needs the resolution through degree {n + 1}")
    return SyzygyModule(n, cokernel_module(res.complex, n))


# strict resolutions ------------------------------------------------------------------

@dataclass
class StrictResolution:
    """``sigma: P = F (+) G -> X`` with every component surjective; ``G`` is exact."""
    sigma: ComplexMorphism
    free_part: ResolutionResult
    disk_ranks: dict

    @property
    def complex(self):
        return self.sigma.source


def strict_resolution(X, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP, base=None):
    """Surjective quasi-isomorphism from a free complex.

    ``G`` is a sum of disks ``E_i --1--> E_i`` in degrees ``i, i-1`` where
    ``E_i`` is free on the generators of ``X_i``; the disk maps onto ``X_i``
    by the generators and onto ``X_{i-1}`` through ``d^X_i``.
    """
    X = as_complex(X)
    alg = X.algebra
    F = base or minimal_free_resolution(X, cutoff, degree_cap)
    P0, s0 = F.complex, F.sigma
    idx = sorted(set(P0.indices) | set(X.indices) | {i - 1 for i in X.indices})
    # summands of P_n: F_n, E_n (top of disk n), E_{n+1} (bottom of disk n+1)
    layout = {n: [P0.gens(n), X.gens(n), X.gens(n + 1)] for n in idx}
    terms = {n: GradedModule.free(alg, [d for part in layout[n] for d in part]) for n in idx}
    diffs, maps = {}, {}
    for n in idx:
        if n - 1 in layout:
            blocks = {(0, 0): P0.d(n)}
            if X.gens(n):
                blocks[(2, 1)] = GradedMatrix.identity(alg, X.gens(n))
            diffs[n] = GradedMatrix.block(alg, blocks, layout[n - 1], layout[n])
        blocks = {(0, 0): s0[n], (0, 1): GradedMatrix.identity(alg, X.gens(n)), (0, 2): X.d(n + 1)}
        maps[n] = GradedMatrix.block(alg, blocks, [X.gens(n)], layout[n])
    rel = P0.reliable
    P = ChainComplex(alg, terms, diffs, rel, check=False)
    sigma = ComplexMorphism(P, X, maps, check=False)
    return StrictResolution(sigma, F, {n: len(X.gens(n)) for n in X.indices})


# short exact sequences --------------------------------------------------------------

def is_short_exact(eta, nu, degree_cap=DEFAULT_CAP):
    """Degreewise exactness of ``0 -> X -> Y -> Z -> 0`` (free complexes or presented ones)."""
    X, Y, Z = eta.source, eta.target, nu.target
    if nu.source is not Y and nu.source != Y:
        return False
    p = Y.algebra.p
    for i in sorted(set(X.indices) | set(Y.indices) | set(Z.indices)):
        gens = X.gens(i) + Y.gens(i) + Z.gens(i)
        lo, hi, _ = degree_window(Y.algebra, gens, degree_cap)
        for e in range(lo, hi + 1):
            dx, dy, dz = X.term(i).dim(e), Y.term(i).dim(e), Z.term(i).dim(e)
            if dx + dz != dy:
                return False
            if not nu.is_surjective_at(i, e):
                return False
            # injectivity of eta on the quotient X_i
            E = eta[i].at_degree(e)
            RY = Y.rel(i).at_degree(e) if Y.term(i).has_relations else np.zeros((E.shape[0], 0), np.int64)
            r_img = linalg.rank(np.hstack([E, RY]), p) - linalg.rank(RY, p)
            if r_img != dx:
                return False
            N = nu[i].at_degree(e)
            RZ = Z.rel(i).at_degree(e) if Z.term(i).has_relations else np.zeros((N.shape[0], 0), np.int64)
            comp = linalg.matmul(N, E, p) if E.size else np.zeros((N.shape[0], E.shape[1]), np.int64)
            if comp.size and linalg.rank(np.hstack([comp, RZ]), p) != linalg.rank(RZ, p):
                return False
    return True


@dataclass
class SESResolution:
    """Resolutions ``T -> X``, ``U -> Y``, ``V -> Z`` with exact row ``0 -> T -> U -> V -> 0``."""
    T: ComplexMorphism
    U: ComplexMorphism
    V: ComplexMorphism
    iota: ComplexMorphism
    theta: ComplexMorphism

    def row_exact(self, degree_cap=DEFAULT_CAP):
        return is_short_exact(self.iota, self.theta, degree_cap)

    def verticals_quasiiso(self, degree_cap=DEFAULT_CAP):
        return all(is_quasiiso(s, degree_cap).verdict for s in (self.T, self.U, self.V))

    def commutes(self, eta, nu):
        """``eta o T = U o iota`` and ``nu o U = V o theta`` on generators modulo relations."""
        from .modules import columns_in_image
        for i in self.U.source.indices:
            a = eta[i] @ self.T[i] - self.U[i] @ self.iota[i]
            b = nu[i] @ self.U[i] - self.V[i] @ self.theta[i]
            if not columns_in_image(a, eta.target.rel(i)) or not columns_in_image(b, nu.target.rel(i)):
                return False
        return True


def _solve_columns(A, cols, degs, relations=None):
    out = lift_columns(A, cols, degs, relations)
    if out is None:
        raise ComplexError("lifting failed")
    return out


def ses_resolution(eta, nu, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP):
    """Compatible resolutions of a short exact sequence ``0 -> X -> Y -> Z -> 0`` of complexes.

    ``V -> Z`` is strict (surjective), ``F -> Y`` is the minimal resolution;
    ``sigma: F -> V`` lifts ``nu o gamma``, disks ``G'`` lift the generators of
    ``V`` to ``Y``, ``U = F (+) G'`` and ``T = ker(U -> V)``.
    """
    X, Y, Z = eta.source, eta.target, nu.target
    alg = Y.algebra
    p = alg.p
    if not is_short_exact(eta, nu, degree_cap):
        raise ComplexError("input sequence is not exact")
    strict = strict_resolution(Z, cutoff, degree_cap)
    alpha = strict.sigma
    V = alpha.source
    Fres = minimal_free_resolution(Y, cutoff, degree_cap)
    F, gamma = Fres.complex, Fres.sigma
    top = cutoff

    # sigma: F -> V with alpha sigma = nu gamma, built degree by degree
    sig = {}
    for n in F.indices:
        if n > top:
            break
        target = nu[n] @ gamma[n]
        cols = target.columns()
        degs = list(F.gens(n))
        relZ = Z.rel(n) if Z.term(n).has_relations else None
        v0 = _solve_columns(alpha[n], cols, degs, relZ)
        V0 = GradedMatrix.from_columns(alg, V.gens(n), v0, degs)
        # correct by w in ker(alpha_n) so that d V0 = sigma_{n-1} d^F
        c = -(V.d(n) @ V0)
        if n - 1 in sig:
            c = c + sig[n - 1] @ F.d(n)
        if not c.is_zero:
            K, _ = kernel_matrix(alpha[n], relZ, degree_cap)
            DK = V.d(n) @ K
            w = _solve_columns(DK, c.columns(), degs)
            V0 = V0 + K @ GradedMatrix.from_columns(alg, K.cols, w, degs)
        sig[n] = V0
    sigma = ComplexMorphism(F, V, sig, check=False)

    # disks G'_n = E_n (+) E_{n+1} with E_n on the generators of V_n
    idx = sorted(set(F.indices) | set(V.indices) | {i - 1 for i in V.indices})
    idx = [n for n in idx if n <= top]
    rho_top = {}
    for n in V.indices:
        if n > top:
            continue
        relZ = Z.rel(n) if Z.term(n).has_relations else None
        # lift each generator of V_n through nu: nu(y) = alpha(v) mod relZ
        ys = _solve_columns(nu[n], alpha[n].columns(), list(V.gens(n)), relZ)
        rho_top[n] = GradedMatrix.from_columns(alg, Y.gens(n), ys, list(V.gens(n)))
    layout = {n: [F.gens(n), V.gens(n), V.gens(n + 1)] for n in idx}
    Uterms = {n: GradedModule.free(alg, [d for part in layout[n] for d in part]) for n in idx}
    Ud, Umap, theta = {}, {}, {}
    for n in idx:
        if n - 1 in layout:
            blocks = {(0, 0): F.d(n)}
            if V.gens(n):
                blocks[(2, 1)] = GradedMatrix.identity(alg, V.gens(n))
            Ud[n] = GradedMatrix.block(alg, blocks, layout[n - 1], layout[n])
        rt = rho_top.get(n, _zero(alg, Y.gens(n), V.gens(n)))
        rb = Y.d(n + 1) @ rho_top[n + 1] if n + 1 in rho_top else _zero(alg, Y.gens(n), V.gens(n + 1))
        Umap[n] = GradedMatrix.block(alg, {(0, 0): gamma[n], (0, 1): rt, (0, 2): rb},
                                     [Y.gens(n)], layout[n])
        vb = V.d(n + 1)
        theta[n] = GradedMatrix.block(alg, {(0, 0): sig.get(n, _zero(alg, V.gens(n), F.gens(n))),
                                            (0, 1): GradedMatrix.identity(alg, V.gens(n)),
                                            (0, 2): vb}, [V.gens(n)], layout[n])
    rel = (None, None) if Fres.complete and strict.free_part.complete else (None, top - 2)
    U = ChainComplex(alg, Uterms, Ud, rel, check=False)
    Vt = _restrict(V, idx, rel)
    thetam = ComplexMorphism(U, Vt, theta, check=False)
    Um = ComplexMorphism(U, Y, Umap, check=False)
    alphat = ComplexMorphism(Vt, Z, {n: alpha[n] for n in Vt.indices}, check=False)

    # T = ker(theta), free since theta is a degreewise split surjection of frees
    Tg, Tinc = {}, {}
    for n in idx:
        K, _ = kernel_matrix(theta[n], None, degree_cap)
        if K.cols:
            Tg[n] = list(K.cols)
            Tinc[n] = K
    Td = {}
    for n in Tg:
        if n - 1 in Tg:
            Td[n] = lift_matrix(Tinc[n - 1], Ud[n] @ Tinc[n])
            if Td[n] is None:
                raise ComplexError("kernel is not a subcomplex")
    T = ChainComplex.free(alg, Tg, Td, reliable=rel, check=False)
    iota = ComplexMorphism(T, U, Tinc, check=False)
    # psi: T -> X with eta psi = U o iota (lift through eta)
    psi = {}
    for n in Tg:
        B = Umap[n] @ Tinc[n]
        cols = _solve_columns(eta[n], B.columns(), list(B.cols), Y.rel(n) if Y.term(n).has_relations else None)
        psi[n] = GradedMatrix.from_columns(alg, X.gens(n), cols, list(B.cols))
    Tm = ComplexMorphism(T, X, psi, check=False)
    return SESResolution(Tm, Um, alphat, iota, thetam)


def _restrict(V, idx, rel):
    keep = set(idx)
    terms = {n: M for n, M in V.terms.items() if n in keep}
    diffs = {n: D for n, D in V.diffs.items() if n in keep and n - 1 in keep}
    return ChainComplex(V.algebra, terms, diffs, rel, check=False)
