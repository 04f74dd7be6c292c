"""Small hand-checkable examples for the basic operations."""

from finalg import catalog
from finalg.algebra import (
    additive_reduct,
    closure_from_maps,
    direct_product,
    inverses_of,
    multiplicative_reduct,
    rees_quotient,
    subalgebra_generated,
)
from finalg.pinj import PartialInjection, compose, identity_map, invert, partial_identity, rank
from finalg.snfam import chi


def test_invert_chi():
    assert invert(chi(2)).as_dict() == {5: 2, 6: 3}


def test_chi_inverse_chi_is_partial_identity():
    assert compose(invert(chi(2)), chi(2)) == partial_identity(9, {5, 6})


def test_rank_of_product_bounded():
    f = PartialInjection.from_dict(4, {0: 1, 1: 2, 3: 0})
    g = PartialInjection.from_dict(4, {1: 3, 2: 2})
    assert rank(compose(f, g)) <= min(rank(f), rank(g))


def test_closure_of_single_identity():
    assert closure_from_maps([identity_map(1)]).size == 1


def test_brandt_inverses():
    B = catalog.brandt_monoid()
    i = B.index
    assert B.inv[i("c")] == i("d")
    assert B.inv[i("cd")] == i("cd")


def test_a21_e_has_several_inverses():
    A = multiplicative_reduct(catalog.a21())
    i = A.index
    assert {i("e"), i("a")} <= set(inverses_of(A, i("e")))


def test_a21_square_sum():
    A = catalog.a21()
    P = direct_product(A, A)
    i = A.index
    n = A.size
    # pairs are laid out row-major
    one_one, e_a, one_a = i("1") * n + i("1"), i("e") * n + i("a"), i("1") * n + i("a")
    assert P.add[one_one, e_a] == one_a


def test_quotient_by_whole_algebra_is_trivial():
    S = multiplicative_reduct(catalog.end_chain(3))
    assert rees_quotient(S, range(S.size)).size == 1


def test_subsemiring_fixing_top_point():
    E = catalog.end_chain(3)
    fixing = [s for s in range(E.size) if E.labels[s].endswith("2)")]
    sub, _ = subalgebra_generated(E, fixing)
    assert sub.size == 6
    assert additive_reduct(sub).size == 6
