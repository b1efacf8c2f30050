"""Homological dimensions: G-dimension, B-dimensions over resolving classes, CI*- and
CI-dimension, the hierarchy between them and the short-exact-sequence harness.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .complexes import (DEFAULT_CAP, NEG_INF, POS_INF, ChainComplex, ComplexMorphism,
                        hom_complex, suspend, sup_inf)
from .invariants import complexity_estimate, depth, poincare_series
from .modules import GradedMatrix, GradedModule, degree_window, kernel_matrix, lift_columns
from .resolution import (DEFAULT_CUTOFF, as_complex, is_short_exact, minimal_free_resolution,
                         projective_dimension, syzygy)
from .ring import (GradedAlgebra, ParseError, PrimeField, RingElement, is_complete_intersection,
                   is_monomial_regular_sequence, load_json, minimalize, parse_monomial)

DEFAULT_WINDOW = 8


# verdicts ---------------------------------------------------------------------------

@dataclass
class DimensionVerdict:
    """A dimension value (int or ``-inf``), a lower bound ``>= c``, or indeterminate."""
    value: float | int | None
    lower_bound: int | None = None
    certificate: dict = field(default_factory=dict)
    name: str = ""

    @property
    def determinate(self):
        return self.value is not None

    @property
    def finite(self):
        return self.value is not None and self.value != POS_INF

    def shift(self, n):
        if self.value is not None:
            v = self.value if self.value in (NEG_INF, POS_INF) else self.value + n
            return DimensionVerdict(v, None, dict(self.certificate), self.name)
        lb = None if self.lower_bound is None else self.lower_bound + n
        return DimensionVerdict(None, lb, dict(self.certificate), self.name)

    def interval(self):
        if self.value is not None:
            return self.value, self.value
        if self.lower_bound is not None:
            return self.lower_bound, POS_INF
        return NEG_INF, POS_INF

    def __str__(self):
        if self.value is None:
            return f">= {self.lower_bound}" if self.lower_bound is not None else "indeterminate"
        if self.value == NEG_INF:
            return "-inf"
        return str(self.value)

    def to_json(self):
        v = None if self.value is None else ("-inf" if self.value == NEG_INF else self.value)
        return {"name": self.name, "value": v, "lower_bound": self.lower_bound,
                "display": str(self), "certificate": _jsonable(self.certificate)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float) and obj in (NEG_INF, POS_INF):
        return "-inf" if obj < 0 else "inf"
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    return str(obj)


# duals and total reflexivity -----------------------------------------------------------

def dual_module(M, degree_cap=DEFAULT_CAP):
    """``Hom(M, R) = ker(phi^T)`` for ``M = coker(phi)``.

    The result carries ``embedding``: the matrix whose columns are its
    generators inside the dual free module ``F_0^*``.
    """
    alg = M.algebra
    phiT = M.relations.transpose()
    K, ex1 = kernel_matrix(phiT, None, degree_cap)
    S, ex2 = kernel_matrix(K, None, degree_cap)
    D = GradedModule(alg, K.cols, S, name="dual")
    D.embedding = K
    D.exact = ex1 and ex2
    return D


@dataclass
class ReflexivityReport:
    window: int
    bidual_iso: bool
    ext_module: dict = field(default_factory=dict)
    ext_dual: dict = field(default_factory=dict)
    exact: bool = True

    @property
    def totally_reflexive(self):
        return (self.bidual_iso and len(self.ext_module) == self.window
                and len(self.ext_dual) == self.window
                and all(self.ext_module.values()) and all(self.ext_dual.values()))


def bidual_is_iso(M, degree_cap=DEFAULT_CAP):
    """Whether ``M -> M**`` is bijective in every internal degree of the window."""
    alg = M.algebra
    p = alg.p
    Ms = dual_module(M, degree_cap)
    K = Ms.embedding
    delta = K.transpose()  # F_0 -> G^*
    rho_t = Ms.relations.transpose()  # G^* -> S^*, M** = ker
    lo1, hi1, _ = degree_window(alg, M.gens, degree_cap)
    lo2, hi2, _ = degree_window(alg, delta.rows, degree_cap)
    for e in range(min(lo1, lo2), max(hi1, hi2) + 1):
        m = M.dim(e)
        r = linalg.rank(delta.at_degree(e), p) if delta.rows and M.gens else 0
        n = len(delta.rows) and (delta.at_degree(e).shape[0] - linalg.rank(rho_t.at_degree(e), p))
        if not (m == r == n):
            return False
    return True


def ext_vanishes(M, i_max, degree_cap=DEFAULT_CAP, start=1):
    """``{i: Ext^i(M, R) == 0}`` for ``start <= i <= i_max``, stopping at the first failure."""
    alg = M.algebra
    out = {}
    top = start
    while top <= i_max:
        top = min(i_max, max(2 * top, start + 1))
        res = minimal_free_resolution(M, top + 1, degree_cap)
        H = hom_complex(res.complex, ChainComplex.from_module(GradedModule.free(alg, [0])))
        for i in range(start, top + 1):
            if i in out:
                continue
            ok = H.homology_vanishes(-i, degree_cap)
            out[i] = ok
            if not ok:
                return out
        if res.complete:
            for i in range(top + 1, i_max + 1):
                out[i] = True
            return out
        if top == i_max:
            break
        start = top + 1
    return out


def totally_reflexive_test(M, window=DEFAULT_WINDOW, degree_cap=DEFAULT_CAP):
    if window < 1:
        raise ValueError("window must be at least 1")
    if M.is_zero() or not M.has_relations:
        return ReflexivityReport(window, True, {i: True for i in range(1, window + 1)},
                                 {i: True for i in range(1, window + 1)})
    exact = M.algebra.is_artinian
    if not bidual_is_iso(M, degree_cap):
        return ReflexivityReport(window, False, {}, {}, exact)
    em = ext_vanishes(M, window, degree_cap)
    if not all(em.values()):
        return ReflexivityReport(window, True, em, {}, exact)
    ed = ext_vanishes(dual_module(M, degree_cap), window, degree_cap)
    return ReflexivityReport(window, True, em, ed, exact)


# resolving classes --------------------------------------------------------------------

@dataclass
class Membership:
    member: bool | None
    evidence: dict = field(default_factory=dict)


class ResolvingClassOracle:
    """A class of modules given by a membership predicate returning :class:`Membership`."""

    name = "abstract"

    def __call__(self, M):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}()"


class FreeOracle(ResolvingClassOracle):
    name = "free"

    def __init__(self, degree_cap=DEFAULT_CAP):
        self.degree_cap = degree_cap

    def __call__(self, M):
        if M.is_zero():
            return Membership(True, {"zero": True})
        res = minimal_free_resolution(M, 1, self.degree_cap)
        return Membership(res.rank(1) == 0, {"beta_1": res.rank(1)})


class TotallyReflexiveOracle(ResolvingClassOracle):
    name = "totally-reflexive"

    def __init__(self, window=DEFAULT_WINDOW, degree_cap=DEFAULT_CAP):
        self.window = window
        self.degree_cap = degree_cap

    def __call__(self, M):
        if M.is_zero():
            return Membership(True, {"zero": True})
        rep = totally_reflexive_test(M, self.window, self.degree_cap)
        return Membership(rep.totally_reflexive, {"report": rep})


class CIStarOracle(ResolvingClassOracle):
    """Totally reflexive with finite complexity."""
    name = "ci-star"

    def __init__(self, window=DEFAULT_WINDOW, cutoff=8, degree_cap=DEFAULT_CAP):
        self.window = window
        self.cutoff = max(cutoff, 7)
        self.degree_cap = degree_cap

    def __call__(self, M):
        if M.is_zero():
            return Membership(True, {"zero": True})
        rep = totally_reflexive_test(M, self.window, self.degree_cap)
        if not rep.totally_reflexive:
            return Membership(False, {"report": rep})
        cx = complexity_estimate(poincare_series(M, self.cutoff, self.degree_cap))
        return Membership(cx.finite, {"report": rep, "complexity": str(cx)})


def b_dimension(X, oracle, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP, resolution=None):
    """``inf{n >= sup X : C_n in B}`` over the syzygies of the minimal resolution."""
    X = as_complex(X)
    s, _ = sup_inf(X, degree_cap)
    if s == NEG_INF:
        return DimensionVerdict(NEG_INF, certificate={"exact": True}, name=oracle.name)
    res = resolution
    if res is None or (res.cutoff < cutoff + 1 and not res.complete):
        res = minimal_free_resolution(X, cutoff + 1, degree_cap)
    for n in range(s, cutoff + 1):
        C = syzygy(res, n).module
        m = oracle(C)
        if m.member is None:
            return DimensionVerdict(None, None, {"indeterminate_at": n, "evidence": m.evidence},
                                    oracle.name)
        if m.member:
            return DimensionVerdict(n, None, {"syzygy": n, "sup": s}, oracle.name)
    return DimensionVerdict(None, cutoff, {"checked": [s, cutoff]}, oracle.name)


def pd_verdict(X, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP):
    v = projective_dimension(X, cutoff, degree_cap)
    return DimensionVerdict(v.value, v.lower_bound, {"betti": v.betti, "certified": v.exact}, "pd")


def rhom_inf(X, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP):
    """``-inf RHom(X, R)`` among the reliable degrees, or ``None`` if nothing nonzero is seen."""
    X = as_complex(X)
    res = minimal_free_resolution(X, cutoff, degree_cap)
    H = hom_complex(res.complex, ChainComplex.from_module(GradedModule.free(X.algebra, [0])))
    for n in H.indices:
        if H.in_window(n) and not H.homology_vanishes(n, degree_cap):
            return -n
    return None


def gdim(X, window=DEFAULT_WINDOW, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP):
    v = b_dimension(X, TotallyReflexiveOracle(window, degree_cap), cutoff, degree_cap)
    v.name = "gdim"
    if v.finite and v.value != NEG_INF:
        v.certificate["minus_inf_rhom"] = rhom_inf(X, max(cutoff, v.value + 2), degree_cap)
    return v


def pci_dim(X, window=DEFAULT_WINDOW, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP):
    v = b_dimension(X, CIStarOracle(window, 8, degree_cap), cutoff, degree_cap)
    v.name = "pcidim"
    if v.finite and v.value != NEG_INF:
        X = as_complex(X)
        v.certificate["ab_value"] = depth(ChainComplex.from_module(
            GradedModule.free(X.algebra, [0])), degree_cap) - depth(X, degree_cap)
    return v


def ci_star_membership(M, window=DEFAULT_WINDOW, cutoff=8, degree_cap=DEFAULT_CAP):
    return CIStarOracle(window, cutoff, degree_cap)(M)


# deformations --------------------------------------------------------------------------

class DeformationError(ValueError):
    pass


@dataclass
class DeformationSpec:
    """``Q = k[ambient_vars]/(Q_relations)`` with ``R = Q/(regular_sequence)``."""
    ambient_vars: tuple
    Q_relations: tuple
    regular_sequence: tuple
    label: str = ""

    @property
    def length(self):
        return len(self.regular_sequence)

    def ambient(self, field=None):
        return GradedAlgebra(list(self.ambient_vars), list(self.Q_relations), field, name="Q")

    def validate(self, R):
        names = tuple(self.ambient_vars)
        missing = [v for v in R.variables if v not in names]
        if missing:
            raise DeformationError(f"ring variables {missing} missing from the deformation")
        if not is_monomial_regular_sequence(len(names), self.regular_sequence, self.Q_relations):
            raise DeformationError("the sequence is not regular over Q")
        ideal = minimalize(list(self.Q_relations) + list(self.regular_sequence))
        extra = [i for i, v in enumerate(names) if v not in R.variables]
        for i in extra:
            unit = tuple(1 if j == i else 0 for j in range(len(names)))
            if unit not in ideal:
                raise DeformationError(f"variable {names[i]} must be killed by the sequence")
        pos = [names.index(v) for v in R.variables]
        rest = [tuple(m[j] for j in pos) for m in ideal
                if not any(m[i] for i in extra)]
        if sorted(minimalize(rest)) != sorted(R.relations):
            raise DeformationError("Q/(f) does not present the ring")
        return True

    def to_json(self):
        return {"ambient_vars": list(self.ambient_vars),
                "Q_relations": [_fmt(m, self.ambient_vars) for m in self.Q_relations],
                "regular_sequence": [_fmt(m, self.ambient_vars) for m in self.regular_sequence]}


def _fmt(m, names):
    from .ring import format_monomial
    return format_monomial(m, names)


def deformation_from_json(data, source="deformation"):
    try:
        names = tuple(data["ambient_vars"])
        rels = tuple(parse_monomial(r, names, source=source) for r in data.get("Q_relations", []))
        seq = tuple(parse_monomial(r, names, source=source) for r in data["regular_sequence"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed deformation entry: {exc}", source=source) from None
    return DeformationSpec(names, rels, seq, data.get("label", ""))


def load_registry(path):
    with open(path) as fh:
        data = load_json(fh.read(), source=path)
    if isinstance(data, dict):
        data = data.get("deformations", [])
    return [deformation_from_json(d, f"{path} entry {k}") for k, d in enumerate(data)]


def trivial_deformation(R):
    return DeformationSpec(R.variables, tuple(R.relations), (), "trivial")


def ambient_deformation(R):
    """``Q = k[vars]`` when the relations of ``R`` form a regular sequence."""
    if not is_complete_intersection(R):
        return None
    return DeformationSpec(R.variables, (), tuple(R.relations), "ambient complete intersection")


def default_registry(R, extra=()):
    out = [trivial_deformation(R)]
    amb = ambient_deformation(R)
    if amb is not None and amb.length:
        out.append(amb)
    for d in extra:
        d.validate(R)
        out.append(d)
    return out


def _lift_element(v, Q, pos):
    terms = {}
    for mono, c in v.terms.items():
        e = [0] * Q.num_vars
        for j, a in zip(pos, mono):
            e[j] = a
        terms[tuple(e)] = c
    return RingElement(Q, terms)


def _lift_matrix(M, Q, pos):
    ent = {ij: _lift_element(v, Q, pos) for ij, v in M.entries.items()}
    return GradedMatrix(Q, M.rows, M.cols, ent, check=False)


def restrict_scalars(X, spec):
    """The complex ``X`` viewed over ``Q`` (relations gain ``f_j * e`` for every generator)."""
    X = as_complex(X)
    R = X.algebra
    spec.validate(R)
    Q = spec.ambient(R.field)
    pos = [list(spec.ambient_vars).index(v) for v in R.variables]
    fs = [Q.monomial(m) for m in spec.regular_sequence]
    terms, diffs = {}, {}
    for i, M in X.terms.items():
        rel = _lift_matrix(M.relations, Q, pos)
        for j, f in enumerate(fs):
            extra = GradedMatrix(Q, M.gens, [g + f.degree for g in M.gens],
                                 {(k, k): f for k in range(len(M.gens))})
            rel = rel.hstack(extra)
        terms[i] = GradedModule(Q, M.gens, rel)
    for i, D in X.diffs.items():
        diffs[i] = _lift_matrix(D, Q, pos)
    return ChainComplex(Q, terms, diffs)


def ci_dim_upper(X, spec, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP):
    """Upper bound ``pd_Q(X) - c`` attached to one deformation."""
    X = as_complex(X)
    XQ = restrict_scalars(X, spec)
    v = projective_dimension(XQ, cutoff, degree_cap)
    cert = {"deformation": spec.label or spec.to_json(), "pd_Q": str(v), "c": spec.length}
    if v.value is None:
        return DimensionVerdict(None, None, cert, "cidim-bound")
    if v.value == NEG_INF:
        return DimensionVerdict(NEG_INF, None, cert, "cidim-bound")
    return DimensionVerdict(v.value - spec.length, None, cert, "cidim-bound")


def ci_dim_best(X, registry=None, cutoff=DEFAULT_CUTOFF, degree_cap=DEFAULT_CAP):
    """Best bound over a registry (default: trivial and ambient deformations)."""
    X = as_complex(X)
    registry = registry if registry is not None else default_registry(X.algebra)
    best = None
    tried = []
    for spec in registry:
        v = ci_dim_upper(X, spec, cutoff, degree_cap)
        tried.append((spec.label, str(v)))
        if v.determinate and (best is None or v.value < best.value):
            best = v
    if best is None:
        return DimensionVerdict(None, None, {"tried": tried}, "cidim-bound")
    best.certificate["tried"] = tried
    return best


@dataclass
class SyzygyReduction:
    """Links CI-dimension of ``X`` and of its syzygy ``C_n``: ``ci(C_n) = max(0, ci(X) - n)``."""
    n: int
    syzygy_zero: bool
    pd: int | float | None = None

    def syzygy_value(self, ci_x):
        if self.syzygy_zero:
            return NEG_INF
        return max(0, ci_x - self.n)

    def complex_value(self, ci_c):
        """Value for ``X`` from ``ci(C_n)``; a zero value only bounds ``ci(X) <= n``."""
        if ci_c > 0:
            return ci_c + self.n, True
        return self.n, False


def ci_syzygy_reduce(X, res, n, degree_cap=DEFAULT_CAP):
    X = as_complex(X)
    s, _ = sup_inf(X, degree_cap)
    if n < s:
        raise ValueError(f"n = {n} is below sup(X) = {s}")
    C = syzygy(res, n).module
    if C.is_zero():
        return SyzygyReduction(n, True, res.pd_value)
    return SyzygyReduction(n, False, None)


# exact sequences -----------------------------------------------------------------------

@dataclass
class PushoutSequence:
    K: GradedModule
    PL: GradedModule
    inc: ComplexMorphism
    proj: ComplexMorphism
    exact: bool


def es_pushout(f, g, phi, degree_cap=DEFAULT_CAP):
    """From ``0 -> L -f-> M -g-> N -> 0`` and ``phi: P -> N`` onto with ``P`` free,
    build ``0 -> K -> P (+) L -> M -> 0`` with ``K = ker(phi)``.

    Maps are :class:`ComplexMorphism` between modules placed in degree 0.
    """
    L, M, N = f.source.term(0), f.target.term(0), g.target.term(0)
    P = phi.source.term(0)
    alg = M.algebra
    if P.has_relations:
        raise ValueError("P must be free")
    if not is_short_exact(f, g, degree_cap):
        raise ValueError("input sequence is not exact")
    if not phi.is_degreewise_surjective(degree_cap):
        raise ValueError("phi is not surjective")
    relN = N.relations if N.has_relations else None
    relM = M.relations if M.has_relations else None
    cols = lift_columns(g[0], phi[0].columns(), list(P.gens), relN)
    if cols is None:
        raise AssertionError("cannot lift P -> N through M")
    gamma = GradedMatrix.from_columns(alg, M.gens, cols, list(P.gens))
    Kinc, _ = kernel_matrix(phi[0], relN, degree_cap)
    syz, _ = kernel_matrix(Kinc, None, degree_cap)
    K = GradedModule(alg, Kinc.cols, GradedMatrix.from_columns(alg, Kinc.cols, syz.columns(), syz.cols))
    gk = gamma @ Kinc
    ls = lift_columns(f[0], gk.columns(), list(gk.cols), relM)
    if ls is None:
        raise AssertionError("gamma(K) is not inside the image of L")
    lk = GradedMatrix.from_columns(alg, L.gens, ls, list(gk.cols))
    PL = P.direct_sum(L)
    incm = Kinc.vstack(-lk)
    projm = gamma.hstack(f[0])
    Kc, PLc, Mc = (ChainComplex.from_module(x) for x in (K, PL, M))
    inc = ComplexMorphism(Kc, PLc, {0: incm})
    proj = ComplexMorphism(PLc, Mc, {0: projm})
    return PushoutSequence(K, PL, inc, proj, is_short_exact(inc, proj, degree_cap))


@dataclass
class ESRecord:
    verdicts: tuple
    pattern: str
    candidate: bool


def es_harness(sequences, dimension, **kw):
    """Evaluate a dimension on each ``(X, Y, Z)`` and flag two-finite/one-infinite patterns.

    This only collects evidence; the underlying question is open.
    """
    out = []
    for X, Y, Z in sequences:
        vs = tuple(dimension(T, **kw) for T in (X, Y, Z))
        fin = [v.finite for v in vs]
        pattern = "".join("F" if f else ("?" if v.value is None and v.lower_bound is None else "L")
                          for f, v in zip(fin, vs))
        cand = sum(fin) == 2 and any(v.lower_bound is not None for v in vs)
        out.append(ESRecord(vs, pattern, cand))
    return out


def two_of_three_holds(vx, vy, vz):
    """If two of the three are finite, the third is at most their max plus one."""
    vs = [vx, vy, vz]
    for k in range(3):
        a, b = [vs[j] for j in range(3) if j != k]
        if a.finite and b.finite:
            bound = max(a.value, b.value) + 1
            c = vs[k]
            lo, _ = c.interval()
            if lo > bound:
                return False
    return True


# hierarchy -----------------------------------------------------------------------------

@dataclass
class HierarchyReport:
    gdim: DimensionVerdict
    pcidim: DimensionVerdict
    cidim: DimensionVerdict
    pd: DimensionVerdict
    violations: list

    @property
    def ok(self):
        return not self.violations

    def chain(self):
        return " <= ".join(f"{n}={v}" for n, v in self.items())

    def items(self):
        return [("gdim", self.gdim), ("pcidim", self.pcidim), ("cidim", self.cidim), ("pd", self.pd)]

    def to_json(self):
        return {"chain": {n: v.to_json() for n, v in self.items()}, "violations": self.violations,
                "ok": self.ok}


def hierarchy_check(X, registry=None, window=DEFAULT_WINDOW, cutoff=DEFAULT_CUTOFF,
                    degree_cap=DEFAULT_CAP):
    """``gdim <= pcidim <= cidim <= pd``, with equality to the left of any finite value."""
    X = as_complex(X)
    vs = [gdim(X, window, cutoff, degree_cap), pci_dim(X, window, cutoff, degree_cap),
          ci_dim_best(X, registry, cutoff, degree_cap), pd_verdict(X, cutoff, degree_cap)]
    names = ["gdim", "pcidim", "cidim", "pd"]
    bad = []
    for a in range(4):
        for b in range(a + 1, 4):
            lo_a, _ = vs[a].interval()
            _, hi_b = vs[b].interval()
            if lo_a > hi_b:
                bad.append(f"{names[a]} ({vs[a]}) exceeds {names[b]} ({vs[b]})")
            if vs[b].finite:
                lo, hi = vs[a].interval()
                if not (lo <= vs[b].value <= hi) or (vs[a].determinate and vs[a].value != vs[b].value):
                    bad.append(f"{names[a]} ({vs[a]}) differs from finite {names[b]} ({vs[b]})")
    return HierarchyReport(*vs, bad)


def suspension_law(fn, X, n, **kw):
    """``dim(S^n X) == dim(X) + n`` on determinate verdicts; returns (holds, a, b)."""
    X = as_complex(X)
    a = fn(X, **kw)
    b = fn(suspend(X, n), **kw)
    if a.determinate and b.determinate:
        return a.shift(n).value == b.value, a, b
    if a.lower_bound is not None and b.lower_bound is not None:
        return True, a, b
    return True, a, b
