"""Seeded random objects and the reference checks run by ``verify`` and the test-suite."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .complexes import (NEG_INF, POS_INF, ChainComplex, ComplexMorphism, cokernel_module, cone,
                        cone_inclusion, cone_projection, hard_truncation_to_cokernel, homology,
                        is_quasiiso, sup_inf, suspend, truncation_map)
from .dimensions import (CIStarOracle, FreeOracle, TotallyReflexiveOracle, b_dimension,
                         ci_dim_best, ci_dim_upper, DeformationSpec, gdim, hierarchy_check, pci_dim,
                         pd_verdict, two_of_three_holds)
from .invariants import (complexity_estimate, depth, koszul_complex, poincare_product_check,
                         poincare_series, ring_depth)
from .modules import GradedMatrix, GradedModule, kernel_matrix
from .resolution import (minimal_free_resolution, projective_dimension, ses_resolution,
                         strict_resolution, syzygy)
from .ring import GradedAlgebra, RingElement, is_complete_intersection


# test rings ----------------------------------------------------------------------------

def hypersurface():
    return GradedAlgebra(["x"], ["x^2"], name="k[x]/(x^2)")


def plane():
    return GradedAlgebra(["x", "y"], name="k[x,y]")


def square_zero():
    return GradedAlgebra(["s", "t"], ["s^2", "s*t", "t^2"], name="k[s,t]/(s^2,st,t^2)")


def ci_pair():
    return GradedAlgebra(["x", "y"], ["x^2", "y^3"], name="k[x,y]/(x^2,y^3)")


def example_complex(R=None):
    """``0 -> R(-1) -s-> R -> 0`` over the square-zero ring."""
    R = R or square_zero()
    d = GradedMatrix(R, [0], [1], {(0, 0): R.element("s")})
    return ChainComplex.free(R, {0: [0], 1: [1]}, {1: d})


# random objects --------------------------------------------------------------------------

def random_element(R, d, rng, allow_zero=True):
    basis = R.basis(d) if d >= 0 else []
    if not basis:
        return R.zero()
    while True:
        terms = {m: rng.randrange(R.p) for m in basis if rng.random() < 0.7}
        v = RingElement(R, terms)
        if allow_zero or not v.is_zero:
            return v


def random_matrix(R, rows, cols, rng, positive=True, density=0.7):
    ent = {}
    for i, a in enumerate(rows):
        for j, b in enumerate(cols):
            d = b - a
            if d < 0 or (positive and d == 0) or rng.random() > density:
                continue
            v = random_element(R, d, rng)
            if not v.is_zero:
                ent[(i, j)] = v
    return GradedMatrix(R, rows, cols, ent)


def random_gens(rng, n_max=2, deg_max=2, base=0):
    return sorted(base + rng.randrange(deg_max + 1) for _ in range(rng.randint(1, n_max)))


def random_module(R, rng):
    kind = rng.choice(["free", "residue", "cyclic", "cyclic"])
    shift = rng.randrange(2)
    if kind == "free":
        return GradedModule.free(R, random_gens(rng, 2, 1))
    if kind == "residue":
        return GradedModule.residue_field(R, shift)
    n = R.num_vars
    monos = []
    for _ in range(rng.randint(1, 2)):
        e = [0] * n
        e[rng.randrange(n)] = rng.randint(1, 2)
        if rng.random() < 0.3:
            e[rng.randrange(n)] += 1
        if R.basis(sum(e)) and tuple(e) in R.index(sum(e)):
            monos.append(R.monomial(e))
    if not monos:
        return GradedModule.residue_field(R, shift)
    return GradedModule.cyclic(R, monos, shift)


def random_free_complex(R, rng, length=None):
    length = rng.randint(1, 2) if length is None else length
    lo = rng.randrange(2)
    g0 = random_gens(rng, 2, 1)
    gens = {lo: g0}
    diffs = {}
    g1 = random_gens(rng, 2, 1, base=min(g0) + 1)
    D1 = random_matrix(R, g0, g1, rng)
    gens[lo + 1] = g1
    diffs[lo + 1] = D1
    if length >= 2:
        K, _ = kernel_matrix(D1, None, 8)
        if K.cols:
            g2 = sorted(K.cols)[:2]
            g2 = [d + rng.randrange(2) for d in g2]
            comb = random_matrix(R, list(K.cols), g2, rng, positive=False)
            D2 = K @ comb
            if not D2.is_zero:
                gens[lo + 2] = g2
                diffs[lo + 2] = D2
    return ChainComplex.free(R, gens, diffs)


def random_complex(R, rng):
    """A small bounded complex: a module in some degree or a free complex."""
    if rng.random() < 0.4:
        return ChainComplex.from_module(random_module(R, rng), rng.randrange(2))
    return random_free_complex(R, rng)


def twist(X, d):
    """Internal degree shift of every term."""
    terms = {i: M.shift(d) for i, M in X.terms.items()}
    diffs = {i: D.shift(d) for i, D in X.diffs.items()}
    return ChainComplex(X.algebra, terms, diffs, X.reliable, check=False)


def random_homotopy_map(X, rng, c):
    """``c * id + d h + h d`` for a random degree-raising ``h`` on a free complex."""
    R = X.algebra
    h = {i: random_matrix(R, X.gens(i + 1), X.gens(i), rng, positive=False, density=0.5)
         for i in X.indices}
    maps = {}
    for i in X.indices:
        S = GradedMatrix.identity(R, X.gens(i)).scale(c)
        if i in h and i + 1 in X.terms:
            S = S + X.d(i + 1) @ h[i]
        if i - 1 in h and i - 1 in X.terms:
            S = S + h[i - 1] @ X.d(i)
        maps[i] = S
    return ComplexMorphism(X, X, maps)


def random_morphism(R, rng):
    X = random_complex(R, rng)
    kind = rng.choice(["identity", "zero", "homotopy", "multiply", "resolution", "truncation",
                       "homotopy"])
    if kind == "identity":
        return ComplexMorphism.identity(X), kind
    if kind == "zero":
        return ComplexMorphism.zero(X, X), kind
    if kind == "homotopy" and X.is_free:
        return random_homotopy_map(X, rng, rng.choice([0, 1, 2])), kind
    if kind == "multiply":
        d = rng.randint(1, 2)
        a = random_element(R, d, rng, allow_zero=False) if R.basis(d) else R.zero()
        src = twist(X, d)
        maps = {i: GradedMatrix(R, X.gens(i), src.gens(i), {(j, j): a for j in range(len(X.gens(i)))},
                                check=False) for i in X.indices}
        return ComplexMorphism(src, X, maps), kind
    if kind == "truncation":
        n = rng.choice(X.indices)
        mode = rng.choice(["soft_right", "hard_right", "soft_left"])
        return truncation_map(X, n, mode), f"truncation-{mode}"
    res = minimal_free_resolution(X, 6, 12)
    if not res.complete:
        return ComplexMorphism.identity(X), "identity"
    return res.sigma, "resolution"


def random_ses(R, rng):
    """``0 -> Y -> Cone(f) -> S X -> 0`` for a random morphism ``f: X -> Y``."""
    f, _ = random_morphism(R, rng)
    V = cone(f)
    return cone_inclusion(f, V), cone_projection(f, V)


# checks ---------------------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} ({self.seconds:.2f}s)"


def _timed(name, fn):
    t = time.perf_counter()
    ok, details = fn()
    return CheckResult(name, bool(ok), details, time.perf_counter() - t)


def check_example(cutoff=8):
    R = square_zero()
    X = example_complex(R)
    k = GradedModule.residue_field(R)
    d = {}
    pd = projective_dimension(X, cutoff)
    d["pd"] = str(pd)
    H0, H1 = homology(X, 0), homology(X, 1)
    d["H0"] = H0.hilbert_table()
    d["H1"] = H1.hilbert_table()
    d["sup_inf"] = sup_inf(X)
    b1 = minimal_free_resolution(H1, cutoff).betti
    d["betti_H1"] = b1
    cx = {name: str(complexity_estimate(poincare_series(M, cutoff)))
          for name, M in (("H0", H0), ("H1", H1), ("k", k))}
    d["complexity"] = cx
    star = {name: CIStarOracle()(M).member for name, M in (("H0", H0), ("H1", H1))}
    d["ci_star"] = star
    ok = (pd.value == 1
          and sorted(d["H0"].values()) == [1, 1] and len(d["H0"]) == 2
          and list(d["H1"].values()) == [2] and len(d["H1"]) == 1
          and d["sup_inf"] == (1, 0)
          and all(b1.get(n) == 2 ** (n + 1) for n in range(cutoff + 1))
          and all(v == "superpolynomial-evidence" for v in cx.values())
          and not any(star.values()))
    return ok, d


def check_hypersurface(cutoff=10):
    R = hypersurface()
    k = GradedModule.residue_field(R)
    d = {}
    res = minimal_free_resolution(k, cutoff)
    d["betti"] = res.betti
    cx = complexity_estimate(poincare_series(k, resolution=res))
    d["cx"] = str(cx)
    g = gdim(k, cutoff=cutoff)
    pc = pci_dim(k, cutoff=cutoff)
    spec = DeformationSpec(("x",), (), ((2,),), "Q = k[x]")
    ci = ci_dim_upper(k, spec, cutoff)
    ab = ring_depth(R) - depth(k)
    h = hierarchy_check(k, [spec], cutoff=cutoff)
    d.update(gdim=str(g), pci=str(pc), ci=str(ci), ab=ab, chain=h.chain(), violations=h.violations)
    ok = (all(res.betti.get(n) == 1 for n in range(cutoff + 1))
          and cx.kind == "exactly" and cx.value == 1
          and g.value == 0 and pc.value == 0 and ci.value == 0 and ab == 0
          and h.ok and h.pd.value is None and h.pd.lower_bound == cutoff
          and h.gdim.value == h.pcidim.value == h.cidim.value == 0)
    return ok, d


def check_regular(cutoff=10):
    R = plane()
    k = GradedModule.residue_field(R)
    res = minimal_free_resolution(k, cutoff)
    pd = projective_dimension(k, resolution=res)
    g = gdim(k, cutoff=cutoff)
    pc = pci_dim(k, cutoff=cutoff)
    ci = ci_dim_best(k, cutoff=cutoff)
    dr = ring_depth(R)
    K = koszul_complex(R).complex
    rec = K.homology_record()
    d = dict(pd=str(pd), gdim=str(g), pci=str(pc), ci=str(ci), betti=res.betti, depth=dr,
             koszul=rec.dims)
    ok = (pd.value == g.value == pc.value == ci.value == 2
          and [res.betti.get(n, 0) for n in range(3)] == [1, 2, 1] and res.complete
          and dr == 2 and all(i == 0 for i in rec.dims))
    return ok, d


def _syzygy_shift(X, cutoff):
    res = minimal_free_resolution(X, cutoff)
    s, inf = sup_inf(X)
    if s == NEG_INF:
        return True
    PX = poincare_series(X, resolution=res)
    for n in range(s, s + 3):
        if n > cutoff - 1 and not res.complete:
            break
        C = syzygy(res, n).module
        PC = poincare_series(C, cutoff - n)
        for m in range(n, cutoff + 1):
            if PX.coefficient(m) != PC.coefficient(m - n):
                return False
        # the remainder t^inf f(t) only lives in degrees inf .. n-1
        if PX.base < inf:
            return False
    return True


def check_poincare(seed=0, pairs=21, cutoff=8):
    rng = random.Random(seed)
    rings = [hypersurface(), plane(), square_zero()]
    table = []
    ok = True
    for t in range(pairs):
        R = rings[t % 3]
        X = random_complex(R, rng)
        if R.name.startswith("k[s,t]"):
            Y = random_free_complex(R, rng)
            c = 6
        else:
            Y = random_complex(R, rng)
            c = cutoff
        pc = poincare_product_check(X, Y, c)
        shift = _syzygy_shift(X, c)
        table.append((R.name, pc.holds, shift, pc.cutoff))
        ok &= pc.holds and shift
    return ok, {"cases": table}


def b_dimension_from_resolution(X, P, oracle, cutoff):
    """Syzygy scan over an arbitrary (not necessarily minimal) free resolution ``P``."""
    s, _ = sup_inf(X)
    if s == NEG_INF:
        return NEG_INF
    for n in range(s, cutoff + 1):
        m = oracle(cokernel_module(P, n))
        if m.member is None:
            return None
        if m.member:
            return n
    return None


def check_reduction(seed=1, instances=20, cutoff=5):
    rng = random.Random(seed)
    rings = [hypersurface(), plane(), square_zero(), hypersurface()]
    rows = []
    ok = True
    for t in range(instances):
        R = rings[t % len(rings)]
        X = random_complex(R, rng)
        oracles = [FreeOracle(), TotallyReflexiveOracle(4), CIStarOracle(4)]
        res = minimal_free_resolution(X, cutoff + 3)
        s, _ = sup_inf(X)
        strict = strict_resolution(X, cutoff + 2).complex
        for o in oracles:
            v = b_dimension(X, o, cutoff, resolution=res)
            if v.determinate and v.value != NEG_INF:
                alt = b_dimension_from_resolution(X, strict, o, cutoff)
                good = alt == v.value
                for n in range(s, s + 3):
                    C = syzygy(res, n).module
                    if C.is_zero():
                        continue
                    w = b_dimension(C, o, cutoff)
                    if w.determinate:
                        good &= w.value == max(0, v.value - n)
                rows.append((t, o.name, str(v), alt, good))
                ok &= good
            if o.name == "free":
                pd = projective_dimension(X, cutoff, resolution=None)
                same = (pd.value == v.value) if pd.determinate else (not v.determinate)
                ok &= same
                rows.append((t, "free=pd", str(v), str(pd), same))
            if o.name == "totally-reflexive":
                g = gdim(X, window=4, cutoff=cutoff)
                same = str(g) == str(v)
                ok &= same
                rows.append((t, "tr=gdim", str(v), str(g), same))
    return ok, {"rows": rows}


def _exact(X):
    return sup_inf(X) == (NEG_INF, POS_INF)


def check_structure(seed=2, morphisms=50, sess=10):
    rng = random.Random(seed)
    rings = [hypersurface(), plane(), square_zero()]
    d = {}
    ok = True
    # truncation quasi-isomorphisms and d^2 = 0
    trunc = []
    for t in range(9):
        R = rings[t % 3]
        X = random_complex(R, rng)
        X.validate()
        s, i = sup_inf(X)
        if s == NEG_INF:
            continue
        a = truncation_map(X, i, "soft_right")
        b = truncation_map(X, s, "soft_left")
        a.source.validate()
        b.target.validate()
        good = bool(is_quasiiso(a)) and bool(is_quasiiso(b))
        if X.is_free:
            c = hard_truncation_to_cokernel(X, s)
            good &= bool(is_quasiiso(c))
        trunc.append(good)
    d["truncations"] = trunc
    ok &= all(trunc)
    # cone exactness <=> quasi-isomorphism
    agree = []
    for t in range(morphisms):
        f, kind = random_morphism(rings[t % 3], rng)
        V = cone(f)
        V.validate()
        q = is_quasiiso(f)
        agree.append((kind, q.verdict, _exact(V) == q.verdict))
    d["cones"] = agree
    ok &= all(a[2] for a in agree) and len(agree) >= 50
    # strict resolutions surjective
    strict = []
    for t in range(6):
        X = random_complex(rings[t % 3], rng)
        st = strict_resolution(X, 5)
        st.complex.validate()
        st.sigma.validate()
        strict.append(st.sigma.is_degreewise_surjective() and bool(is_quasiiso(st.sigma)))
    d["strict"] = strict
    ok &= all(strict)
    # resolutions of short exact sequences
    rows = []
    for t in range(sess):
        R = rings[t % 2]
        eta, nu = random_ses(R, rng)
        S = ses_resolution(eta, nu, 5)
        for m in (S.T, S.U, S.V, S.iota, S.theta):
            m.source.validate()
            m.validate()
        rows.append(S.row_exact() and S.verticals_quasiiso() and S.commutes(eta, nu))
    d["ses"] = rows
    ok &= all(rows) and len(rows) >= 10
    # suspension law
    law = []
    for t, R in enumerate([hypersurface(), plane(), square_zero(), hypersurface()]):
        X = random_complex(R, rng) if t < 3 else example_complex()
        n = rng.randint(1, 3)
        Y = suspend(X, n)
        for name, fn in (("pd", lambda Z: pd_verdict(Z, 5)), ("gdim", lambda Z: gdim(Z, 4, 5)),
                         ("pci", lambda Z: pci_dim(Z, 4, 5)), ("ci", lambda Z: ci_dim_best(Z, None, 5))):
            a, b = fn(X), fn(Y)
            if a.determinate and b.determinate:
                law.append((name, a.shift(n).value == b.value))
    d["suspension"] = law
    ok &= all(v for _, v in law)
    return ok, d


def check_two_of_three(seed=3, sess=10):
    rng = random.Random(seed)
    R = hypersurface()
    rows = []
    ok = True
    for _ in range(sess):
        eta, nu = random_ses(R, rng)
        vs = [pci_dim(Z, 4, 6) for Z in (eta.source, eta.target, nu.target)]
        good = two_of_three_holds(*vs)
        rows.append(([str(v) for v in vs], good))
        ok &= good
    return ok, {"rows": rows}


def check_ci_detection(cutoff=6):
    rows = {}
    ok = True
    for R, expect in ((hypersurface(), True), (plane(), True), (ci_pair(), True),
                      (square_zero(), False)):
        ci = is_complete_intersection(R)
        v = pci_dim(GradedModule.residue_field(R), 8, cutoff)
        good = ci == expect and (v.finite if expect else (v.value is None and v.lower_bound == cutoff))
        rows[R.name] = (ci, str(v), good)
        ok &= good
    return ok, rows


CRITERIA = [
    ("1 example golden test", check_example),
    ("2 hypersurface", check_hypersurface),
    ("3 regular ring", check_regular),
    ("4 Poincare identities", check_poincare),
    ("5 syzygy reduction", check_reduction),
    ("6 structural suite", check_structure),
    ("7 two-of-three", check_two_of_three),
    ("8 CI detection", check_ci_detection),
]


def run_suite(names=None, seed=None):
    out = []
    for name, fn in CRITERIA:
        if names and not any(name.startswith(n) for n in names):
            continue
        if seed is not None and "seed" in fn.__code__.co_varnames:
            out.append(_timed(name, lambda fn=fn: fn(seed=seed)))
        else:
            out.append(_timed(name, fn))
    return out
