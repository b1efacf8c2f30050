import random

import pytest

from homdim.complexes import NEG_INF, POS_INF, ChainComplex, sup_inf, tensor_complexes
from homdim.invariants import (PoincareData, complexity_estimate, depth, derived_hom,
                               derived_tensor, koszul_complex, poincare_product_check,
                               poincare_series, ring_depth)
from homdim.modules import GradedModule
from homdim.resolution import minimal_free_resolution, projective_dimension
from homdim.verification import random_complex, random_free_complex, random_module


def series(coeffs, complete=False):
    return PoincareData(0, list(coeffs), len(coeffs) - 1, complete)


def test_derived_tensor_with_unit(X46, B):
    R = GradedModule.free(B, [0])
    T = derived_tensor(X46, R, 5)
    assert T.homology_record().dims == X46.homology_record().dims


def test_tor_of_k_over_hypersurface(H):
    k = GradedModule.residue_field(H)
    T = derived_tensor(k, k, 7)
    tot = T.total_homology_dims()
    assert all(tot.get(n) == 1 for n in range(7))


def test_betti_as_tor_with_k(X46, B):
    k = GradedModule.residue_field(B)
    res = minimal_free_resolution(X46, 5)
    T = derived_tensor(X46, k, 5, resolution=res)
    tot = T.total_homology_dims()
    assert {n: tot.get(n, 0) for n in range(3)} == {n: res.rank(n) for n in range(3)}


def test_derived_hom_examples(H, S):
    kH = GradedModule.residue_field(H)
    D = derived_hom(kH, GradedModule.free(H, [0]), 5)
    assert sup_inf(D)[1] == 0
    kS = GradedModule.residue_field(S)
    D = derived_hom(kS, GradedModule.free(S, [0]), 4)
    assert -sup_inf(D)[1] == 2
    unit = derived_hom(GradedModule.free(S, [0]), kS, 3)
    assert unit.homology_record().dims == {0: {0: 1}}


def test_poincare_series(H, S, B):
    assert poincare_series(GradedModule.residue_field(H), 6).coefficients == [1] * 7
    p = poincare_series(GradedModule.residue_field(S), 6)
    assert p.coefficients == [1, 2, 1] and p.complete
    z = poincare_series(ChainComplex.zero(B))
    assert z.is_zero and str(z) == "0"


def test_poincare_product(H, B, X46):
    k = GradedModule.residue_field(H)
    chk = poincare_product_check(k, k, 8)
    assert chk.holds
    assert [chk.table[n][0] for n in range(9)] == [n + 1 for n in range(9)]
    assert poincare_product_check(k, GradedModule.free(H, [0]), 6).holds
    assert poincare_product_check(X46, GradedModule.residue_field(B), 6).holds


def test_complexity_estimator():
    assert complexity_estimate(series([1] * 11)).value == 1
    assert str(complexity_estimate(series([2 ** n for n in range(11)]))) == "superpolynomial-evidence"
    assert str(complexity_estimate(series([1, 2, 1], complete=True))) == "exactly 0"
    v = complexity_estimate(series([n + 1 for n in range(11)]))
    assert (v.kind, v.value) == ("exactly", 2)
    v = complexity_estimate(series([n * n + 1 for n in range(12)]))
    assert (v.kind, v.value) == ("exactly", 3)
    with pytest.raises(ValueError):
        complexity_estimate(series([1, 1, 1, 1, 1]))


def test_complexity_at_least():
    v = complexity_estimate(series([1, 3, 2, 5, 3, 7, 4, 9, 5, 11, 6, 13]))
    assert v.kind == "at least" and v.value >= 1
    assert v.finite is None


def test_koszul_complex(S, B):
    K = koszul_complex(S).complex
    assert K.ranks() == {0: 1, 1: 2, 2: 1}
    assert all(i == 0 for i in K.homology_record().dims)
    assert koszul_complex(B).complex.ranks() == {0: 1, 1: 2, 2: 1}
    with pytest.raises(ValueError):
        koszul_complex(S, ["x + y^2"])


def test_depth(S, B, H):
    assert ring_depth(S) == 2
    assert ring_depth(B) == 0
    assert ring_depth(H) == 0
    assert depth(ChainComplex.zero(S)) == POS_INF
    assert depth(GradedModule.residue_field(S)) == 0


def test_depth_permutation_invariant(S, B):
    rng = random.Random(4)
    for R in (S, B):
        for _ in range(3):
            X = random_complex(R, rng)
            assert depth(X, sequence=list(R.variables)) == depth(X, sequence=list(R.variables)[::-1])


def test_auslander_buchsbaum(S):
    rng = random.Random(7)
    seen = 0
    for _ in range(6):
        M = random_module(S, rng)
        v = projective_dimension(M, 5)
        if v.determinate:
            assert v.value == ring_depth(S) - depth(M)
            seen += 1
    assert seen


def test_complexity_of_syzygy_matches(H, B):
    k = GradedModule.residue_field(H)
    res = minimal_free_resolution(k, 12)
    from homdim.resolution import syzygy
    C = syzygy(res, 1).module
    a = complexity_estimate(poincare_series(k, 10))
    b = complexity_estimate(poincare_series(C, 10))
    assert str(a) == str(b)


def test_complexity_subadditive_evidence(H):
    k = GradedModule.residue_field(H)
    cx = complexity_estimate(poincare_series(k, 10))
    T = derived_tensor(k, k, 11)
    both = complexity_estimate(poincare_series(T, 10))
    assert both.value <= cx.value + cx.value
