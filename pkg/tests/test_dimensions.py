import json

import pytest

from homdim.complexes import NEG_INF, ChainComplex, suspend
from homdim.dimensions import (CIStarOracle, DeformationError, DeformationSpec, FreeOracle,
                               TotallyReflexiveOracle, ambient_deformation, b_dimension,
                               ci_dim_best, ci_dim_upper, ci_star_membership, ci_syzygy_reduce,
                               default_registry, deformation_from_json, dual_module, es_pushout,
                               gdim, hierarchy_check, load_registry, pci_dim, pd_verdict,
                               suspension_law, totally_reflexive_test, two_of_three_holds,
                               DimensionVerdict)
from homdim.complexes import ComplexMorphism
from homdim.modules import GradedMatrix, GradedModule
from homdim.resolution import minimal_free_resolution, projective_dimension
from homdim.ring import ParseError, parse_monomial


def test_dual_module(H, S):
    F = GradedModule.free(H, [0, 1])
    assert dual_module(F).rank == 2
    kd = dual_module(GradedModule.residue_field(H))
    assert [kd.dim(e) for e in range(-2, 3)] == [0, 0, 0, 1, 0]
    assert dual_module(GradedModule.residue_field(S)).is_zero()


def test_totally_reflexive(H, B):
    assert totally_reflexive_test(GradedModule.free(B, [0]), 4).totally_reflexive
    assert totally_reflexive_test(GradedModule.residue_field(H), 6).totally_reflexive
    rep = totally_reflexive_test(GradedModule.residue_field(B), 4)
    assert not rep.totally_reflexive


def test_oracles_accept_zero(B):
    Z = GradedModule(B, [], None)
    for o in (FreeOracle(), TotallyReflexiveOracle(4), CIStarOracle(4)):
        assert o(Z).member


def test_gdim(H, B, S, X46):
    assert gdim(GradedModule.residue_field(H)).value == 0
    assert gdim(GradedModule.residue_field(S)).value == 2
    v = gdim(GradedModule.residue_field(B), cutoff=4)
    assert v.value is None and v.lower_bound == 4
    assert gdim(ChainComplex.zero(B)).value == NEG_INF
    assert gdim(GradedModule.free(B, [3])).value == 0


def test_b_dimension_free_matches_pd(S, C):
    for R in (S, C):
        for M in (GradedModule.residue_field(R), GradedModule.cyclic(R, ["x"])):
            a = b_dimension(M, FreeOracle(), cutoff=5)
            b = projective_dimension(M, 5)
            assert a.value == b.value or (a.value is None and not b.determinate)


def test_suspension_law(H, S, X46):
    k = GradedModule.residue_field(S)
    for n in (-2, 1, 3):
        holds, a, b = suspension_law(pd_verdict, k, n)
        assert holds and b.value == 2 + n
    holds, a, b = suspension_law(gdim, GradedModule.residue_field(H), 2)
    assert holds and b.value == 2
    holds, _, b = suspension_law(gdim, X46, 1, cutoff=4)
    assert holds


def test_ci_star(H, B, C):
    assert ci_star_membership(GradedModule.residue_field(H)).member
    assert ci_star_membership(GradedModule.residue_field(C)).member
    assert ci_star_membership(GradedModule.free(B, [0])).member
    assert not ci_star_membership(GradedModule.maximal_ideal(B), window=4).member


def test_pci_dim(H, C, B):
    assert pci_dim(GradedModule.residue_field(H)).value == 0
    assert pci_dim(GradedModule.residue_field(C)).value == 0
    v = pci_dim(GradedModule.residue_field(B), cutoff=4)
    assert v.value is None and v.lower_bound == 4
    assert pci_dim(GradedModule.free(B, [0])).value == 0


def test_ci_dim_upper(H, S, C, B):
    amb = ambient_deformation(C)
    assert amb is not None and amb.length == 2
    assert ci_dim_upper(GradedModule.residue_field(C), amb).value == 0
    assert ci_dim_best(GradedModule.residue_field(S)).value == 2
    assert ci_dim_best(GradedModule.residue_field(H)).value == 0
    assert ambient_deformation(B) is None
    v = ci_dim_best(GradedModule.residue_field(B), cutoff=4)
    assert not v.finite


def test_deformation_validation(H):
    names = ("x", "z")
    bad = DeformationSpec(names, (), (parse_monomial("x^2", names),))
    with pytest.raises(DeformationError):
        bad.validate(H)
    good = DeformationSpec(names, (), (parse_monomial("x^2", names), parse_monomial("z", names)))
    assert good.validate(H)
    with pytest.raises(DeformationError):
        DeformationSpec(("z",), (), ()).validate(H)
    with pytest.raises(DeformationError):
        DeformationSpec(("x",), (), (parse_monomial("x^2", ("x",)),) * 2).validate(H)
    assert len(default_registry(H, [good])) == 3


def test_registry_json(tmp_path, data_dir, H):
    reg = load_registry(data_dir / "hypersurface_deformation.json")
    assert reg and all(d.validate(H) for d in reg)
    p = tmp_path / "bad.json"
    p.write_text(json.dumps([{"ambient_vars": ["x"], "regular_sequence": ["x^"]}]))
    with pytest.raises(ParseError):
        load_registry(p)
    with pytest.raises(ParseError):
        deformation_from_json({"ambient_vars": ["x"]})


def test_ci_syzygy_reduce(S, H):
    k = GradedModule.residue_field(S)
    res = minimal_free_resolution(k, 6)
    red = ci_syzygy_reduce(k, res, 3)
    assert red.syzygy_zero and red.syzygy_value(2) == NEG_INF
    red = ci_syzygy_reduce(k, res, 1)
    assert red.syzygy_value(2) == 1 and red.complex_value(1) == (2, True)
    assert red.complex_value(0) == (1, False)
    with pytest.raises(ValueError):
        ci_syzygy_reduce(suspend(ChainComplex.from_module(k), 2), res, 1)


def test_es_pushout_split(B):
    R = B
    L, N = GradedModule.free(R, [0]), GradedModule.residue_field(R)
    M = L.direct_sum(N)
    Lc, Mc, Nc = (ChainComplex.from_module(x) for x in (L, M, N))
    f = ComplexMorphism(Lc, Mc, {0: GradedMatrix(R, [0, 0], [0], {(0, 0): R.one()})})
    g = ComplexMorphism(Mc, Nc, {0: GradedMatrix(R, [0], [0, 0], {(0, 1): R.one()})})
    P = ChainComplex.from_module(GradedModule.free(R, [0]))
    phi = ComplexMorphism(P, Nc, {0: GradedMatrix(R, [0], [0], {(0, 0): R.one()})})
    out = es_pushout(f, g, phi)
    assert out.exact
    assert out.K.minimal_generator_count() == 2
    v = [gdim(x, window=4, cutoff=3) for x in (out.K, out.PL, M)]
    assert two_of_three_holds(*v)


def test_es_pushout_free_quotient(S):
    R = S
    L, N = GradedModule.free(R, [1]), GradedModule.free(R, [0])
    M = L.direct_sum(N)
    Lc, Mc, Nc = (ChainComplex.from_module(x) for x in (L, M, N))
    f = ComplexMorphism(Lc, Mc, {0: GradedMatrix(R, [1, 0], [1], {(0, 0): R.one()})})
    g = ComplexMorphism(Mc, Nc, {0: GradedMatrix(R, [0], [1, 0], {(0, 1): R.one()})})
    phi = ComplexMorphism(Nc, Nc, {0: GradedMatrix.identity(R, [0])})
    out = es_pushout(f, g, phi)
    assert out.exact and out.K.is_zero()
    with pytest.raises(ValueError):
        es_pushout(g, f, phi)


def test_two_of_three_logic():
    F = lambda v: DimensionVerdict(v)
    assert two_of_three_holds(F(0), F(1), F(2))
    assert not two_of_three_holds(F(0), F(0), F(5))
    assert two_of_three_holds(F(0), F(0), DimensionVerdict(None, 1))
    assert not two_of_three_holds(F(0), F(0), DimensionVerdict(None, 4))


def test_hierarchy(H, S, B, X46):
    for M in (GradedModule.residue_field(H), GradedModule.residue_field(S), X46):
        rep = hierarchy_check(M, cutoff=5)
        assert rep.ok, rep.violations
    rep = hierarchy_check(ChainComplex.zero(B))
    assert all(v.value == NEG_INF for _, v in rep.items())
    rep = hierarchy_check(GradedModule.residue_field(S))
    assert [v.value for _, v in rep.items()] == [2, 2, 2, 2]
    assert json.loads(json.dumps(rep.to_json()))["ok"]


def test_verdict_display():
    assert str(DimensionVerdict(NEG_INF)) == "-inf"
    assert str(DimensionVerdict(None, 3)) == ">= 3"
    assert str(DimensionVerdict(None)) == "indeterminate"
    assert DimensionVerdict(None, 3).shift(2).lower_bound == 5
