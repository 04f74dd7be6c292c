import itertools

import pytest
from hypothesis import given, strategies as st

from finalg.algebra import multiplicative_reduct
from finalg.catalog import a21, b21, brandt_monoid, end0_chain, end_chain
from finalg.kadourek import in_var_b21
from finalg.terms import (
    TIMES_INVERSE,
    TIMES_ONLY,
    Add,
    BudgetExceeded,
    Identity,
    Inv,
    Mul,
    TermSyntaxError,
    UnsupportedSignature,
    Var,
    a21_satisfies,
    all_words,
    check_identity,
    eval_term,
    first_occurrence_word,
    jumps_of,
    last_occurrence_word,
    parse_identity,
    parse_term,
    parse_word,
    rewrite_identity,
    rewrite_plus_to_inv,
    signature_of,
    term_to_word,
    vn_identity,
    vn_pair,
    word_to_term,
)

from oracles import naive_identity, naive_jumps


def test_parse_precedence():
    t = parse_term("x + y*z")
    assert isinstance(t, Add) and isinstance(t.right, Mul)
    t = parse_term("(x*y^-1)^2*x")
    S = brandt_monoid()
    for x, y in itertools.product(range(S.size), repeat=2):
        want = S.mul[S.mul[S.mul[S.mul[x, S.inv[y]], x], S.inv[y]], x]
        assert eval_term(t, {"x": x, "y": y}, S) == want
    assert signature_of(parse_term("x^-1")) == TIMES_INVERSE
    assert signature_of(parse_term("x y")) == TIMES_ONLY


@pytest.mark.parametrize("bad", ["x +", "(x*y", "x = y", "x ^ 0", ")", "x**y", ""])
def test_parse_errors(bad):
    with pytest.raises(TermSyntaxError):
        parse_term(bad)


def test_identity_signature_checked():
    with pytest.raises(UnsupportedSignature):
        Identity(parse_term("x+y"), parse_term("x"), TIMES_ONLY)
    with pytest.raises(UnsupportedSignature):
        check_identity(multiplicative_reduct(a21()), parse_identity("x + y = y + x"))
    with pytest.raises(UnsupportedSignature):
        check_identity(a21(), parse_identity("x^-1 = x"))


def test_words_round_trip():
    w = parse_word("x1 x2 x1")
    assert w == ("x1", "x2", "x1")
    assert term_to_word(word_to_term(w)) == w


def test_contrasts():
    A, E = a21(), end0_chain(3)
    sq, ab = parse_identity("x + x*x = x*x"), parse_identity("x + x*x = x")
    assert check_identity(A, sq).holds and check_identity(E, ab).holds
    r = check_identity(E, sq)
    assert not r.holds and E.labels[r.counterexample["x"]] == "(0,0,1)"
    assert not check_identity(A, ab).holds


def test_counterexample_is_lexicographically_first():
    R = multiplicative_reduct(end_chain(3))
    ident = parse_identity("x*y = y*x")
    r = check_identity(R, ident)
    want = naive_identity(R.mul.tolist(), ("x", "y"), ("y", "x"))
    assert r.counterexample == want


def test_budget():
    R = end_chain(3)
    with pytest.raises(BudgetExceeded):
        check_identity(R, parse_identity("x + y = y + x"), budget=50)
    # a counterexample inside the budget is still reported
    r = check_identity(R, parse_identity("x*y = y*x"), budget=50)
    assert not r.holds


def test_vn_words():
    v, w = vn_pair(2)
    assert " ".join(v) == "x1 x2 x3 x4 x2 x1 x3 x4 x1 x2"
    assert w[:8] == v[:8] and w[8:16] == v[:8] and w[-2:] == v[-2:]
    with pytest.raises(ValueError):
        vn_pair(1)


def test_end_c3_satisfies_v2():
    r = check_identity(multiplicative_reduct(end_chain(3)), vn_identity(2))
    assert r.holds and r.checked == 10**4


def test_jumps_match_oracle_on_all_short_words():
    for w in all_words(["x", "y", "z"], 5):
        got = {(j.x, j.between, j.y) for j in jumps_of(w)}
        assert got == naive_jumps(w)


def test_jump_criterion_agrees_with_exhaustion():
    A = multiplicative_reduct(a21())
    words = all_words(["x", "y"], 5)
    for w, w2 in itertools.combinations_with_replacement(words, 2):
        ident = Identity(word_to_term(w), word_to_term(w2), TIMES_ONLY)
        assert a21_satisfies(w, w2) == check_identity(A, ident).holds, (w, w2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_a21_satisfies_vn(n):
    assert a21_satisfies(*vn_pair(n))


def test_occurrence_words():
    v, _ = vn_pair(2)
    assert first_occurrence_word(v) == ("x1", "x2", "x3", "x4")
    assert last_occurrence_word(v) == ("x3", "x4", "x1", "x2")


def test_rewrite_matches_nat_addition():
    S, R = brandt_monoid(), b21()
    ident = parse_identity("x + y*z = (x + y)*(x + z)")
    rw = rewrite_identity(ident)
    assert rw.signature == TIMES_INVERSE
    for x, y, z in itertools.product(range(S.size), repeat=3):
        env = {"x": x, "y": y, "z": z}
        assert eval_term(rw.lhs, env, S) == eval_term(ident.lhs, env, R)
        assert eval_term(rw.rhs, env, S) == eval_term(ident.rhs, env, R)


def test_rewrite_rejects_inverse_input():
    with pytest.raises(UnsupportedSignature):
        rewrite_plus_to_inv(Inv(Var("x")))


def test_membership_consistent_with_rewritten_identity():
    # inverse semigroups in the variety satisfy every identity of B21 rewritten with inverses
    from finalg.snfam import tn
    ident = rewrite_identity(parse_identity("x + x*x = x*x"))
    B = brandt_monoid()
    assert check_identity(B, ident).holds
    T = tn(2, 1).S
    assert in_var_b21(T).member
    assert check_identity(T, ident).holds


letters = st.sampled_from(["x", "y", "z"])


@given(st.lists(letters, min_size=1, max_size=8), st.lists(letters, min_size=1, max_size=8))
def test_jump_criterion_symmetric_and_reflexive(w, w2):
    assert a21_satisfies(w, w)
    assert a21_satisfies(w, w2) == a21_satisfies(w2, w)


@given(st.lists(letters, min_size=1, max_size=6))
def test_words_stable_under_squaring_in_a21(w):
    # A21 is aperiodic with x^2 = x^3
    w = tuple(w)
    assert a21_satisfies(w + w, w + w + w)
