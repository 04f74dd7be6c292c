import itertools

import pytest

from finalg.algebra import verify_inverse
from finalg.green import green, is_combinatorial
from finalg.pinj import compose, empty_map, rank
from finalg.snfam import (
    build_sn,
    check_relation_references,
    check_separation_claims,
    check_tau_references,
    chi,
    chi_i,
    dclass_shape_check,
    expected_size,
    literal_claim_exceptions,
    phi_n,
    separation_claims,
    sn_generators,
    tau_references,
    tn,
    verify_formulas,
    verify_tn_membership,
    verify_vn_separation,
    zeta,
)
from finalg.terms import check_identity, parse_identity, vn_identity

from oracles import set_closure, sn_generator_dicts


def test_generators_n2():
    assert str(chi(2)) == "{2→5, 3→6}"
    assert str(chi_i(2, 1)) == "{0→1, 4→3, 6→7}"
    for n in (2, 3, 4):
        for g in sn_generators(n):
            assert g.degree == 3 * n + 3 and rank(g) <= 3
    with pytest.raises(ValueError):
        sn_generators(1)
    with pytest.raises(ValueError):
        chi_i(2, 3)


@pytest.mark.parametrize("n,size", [(2, 103), (3, 177), (4, 271)])
def test_sizes_against_set_closure(n, size):
    assert build_sn(n).S.size == size == expected_size(n)
    assert len(set_closure(sn_generator_dicts(n))) == size


def test_contains_empty_map_and_zeta_eta():
    n = 3
    sn = build_sn(n)
    assert sn.S.id_of(empty_map(3 * n + 3)) in sn.blocks["0"]
    for i, j in itertools.product(range(n + 1), repeat=2):
        assert sn.zeta(i, j) in sn.blocks["C"]
    assert len(sn.blocks["C"]) == (n + 1) ** 2
    assert len(sn.blocks["D"]) == (3 * n + 3) ** 2


@pytest.mark.parametrize("n", [2, 3, 4])
def test_formulas_and_shape(n):
    assert verify_formulas(n) is None
    assert dclass_shape_check(n) is None


def test_formula_examples():
    assert str(compose(chi_i(2, 2), chi_i(2, 1))) == "{5→3}"
    assert str(compose(chi_i(2, 1), chi_i(2, 2))) == "{0→2, 6→8}"
    assert compose(chi(3), chi_i(3, 2)) == empty_map(12)
    assert compose(chi_i(3, 1), chi(3)).as_dict() == {5: 8}


@pytest.mark.parametrize("n", [2, 3])
def test_rank_partition_is_d_partition(n):
    sn = build_sn(n)
    G = green(sn.S)
    for cls in G.d_classes:
        names = {sn.block_of(s) for s in cls}
        assert len(names) == 1
    ranks = {name: {rank(sn.S.payload[s]) for s in ids} for name, ids in sn.blocks.items()}
    assert all(ranks[f"B{i}"] == {3} for i in range(1, n + 1))
    assert ranks["C"] == ranks["E"] == {2} and ranks["D"] == {1} and ranks["0"] == {0}


@pytest.mark.parametrize("n", [2, 3])
def test_zeta_products(n):
    for i, l, j in itertools.product(range(n + 1), repeat=3):
        assert zeta(n, i, j) == compose(zeta(n, i, l), zeta(n, l, j))


@pytest.mark.parametrize("n", [2, 3])
def test_aperiodic_and_combinatorial(n):
    S = build_sn(n).S
    assert check_identity(S, parse_identity("x*x = x*x*x")).holds
    assert is_combinatorial(S)


def test_tn():
    T = tn(2, 1)
    assert T.S.size == 99 and verify_inverse(T.S) is None
    for name in ("C", "D", "E", "0"):
        assert len(T.blocks[name]) == len(T.sn.blocks[name])
    with pytest.raises(ValueError):
        tn(2, 3)


@pytest.mark.parametrize("n", [2, 3])
def test_vn_separation(n):
    r = verify_vn_separation(n)
    assert r.holds and r.value_v(0) == 3 * n + 2
    assert r.value_v_prime == empty_map(3 * n + 3)


def test_phi2_is_a_counterexample():
    sn = build_sn(2)
    from finalg.terms import eval_term
    ident = vn_identity(2)
    env = {x: sn.id(f) for x, f in phi_n(2).items()}
    assert eval_term(ident.lhs, env, sn.S) != eval_term(ident.rhs, env, sn.S)
    assert not check_identity(sn.S, ident).holds


@pytest.mark.parametrize("n", [2, 3, 4])
def test_relation_references(n):
    assert check_relation_references(n) == []


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_tau_references(n):
    for k in range(1, n + 1):
        assert check_tau_references(n, k) == []


def test_tau_reference_n3_k3_m1():
    refs = [r for r in tau_references(3, 3) if r.filter == ("B2",) and r.params == {"m": 1}]
    assert len(refs) == 1
    assert refs[0].classes == ((0, 5, 6, 7, 8), (1, 2, 3, 4, 9, 10, 11))
    assert check_tau_references(3, 3) == []


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_separation_claims(n):
    for k in range(1, n + 1):
        assert check_separation_claims(n, k) == set()
        assert check_separation_claims(n, k, literal=True) == literal_claim_exceptions(n, k)


def test_claims_cover_many_pairs():
    total = sum(len(c.s) * len(c.t) for c in separation_claims(3, 2))
    assert total > 50


@pytest.mark.parametrize("n", [2, 3])
def test_tn_membership(n):
    r = verify_tn_membership(n)
    assert r.holds and all(r.members.values()) and not r.sn_member
