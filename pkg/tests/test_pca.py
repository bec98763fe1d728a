import pytest
from hypothesis import given, settings, strategies as st

from herbrand import pca
from herbrand.pca import (CAT, EMPTY, FST, I, K, LEN, NCASE, PROJ, S, SND, SUCC, App, Diverged,
                          Num, Pair, Seq, Stuck, Value, Var, app, lam, normalize, parse, show)
from herbrand.sexpr import ParseError
from strategies import seq_codes, sk_terms, terms

OMEGA = app(app(S, I), I)


def nf(t, fuel=pca.DEFAULT_FUEL):
    res = normalize(t, fuel)
    assert isinstance(res, Value), res
    return res.term


# -- an independent small-step reducer over S and K only ---------------------------


def step(t):
    """One leftmost-outermost reduction step, or None when ``t`` is normal."""
    spine, args = t, []
    while isinstance(spine, App):
        args.append(spine.arg)
        spine = spine.fun
    args.reverse()
    if spine is K and len(args) >= 2:
        return rebuild(args[0], args[2:])
    if spine is S and len(args) >= 3:
        x, y, z = args[:3]
        return rebuild(App(App(x, z), App(y, z)), args[3:])
    for i, a in enumerate(args):
        r = step(a)
        if r is not None:
            return rebuild(spine, args[:i] + [r] + args[i + 1:])
    return None


def rebuild(head, args):
    for a in args:
        head = App(head, a)
    return head


def oracle_nf(t, limit=300):
    for _ in range(limit):
        r = step(t)
        if r is None:
            return t
        t = r
    return None


@settings(max_examples=300, deadline=None)
@given(sk_terms)
def test_normal_forms_match_small_step_oracle(t):
    expected = oracle_nf(t)
    if expected is None:
        return
    res = normalize(t, 5000)
    if isinstance(res, Value):
        assert res.term == expected


def test_sk_basics():
    a, b, c = Num(1), Num(2), Num(3)
    assert nf(app(K, a, b)) == a
    assert nf(App(I, a)) == a
    assert nf(app(S, K, K, c)) == c
    assert nf(app(K, a)) == app(K, a)


def test_omega_diverges():
    res = normalize(App(OMEGA, OMEGA), 1000)
    assert isinstance(res, Diverged)
    assert res.steps > 0


@settings(max_examples=200, deadline=None)
@given(terms, st.integers(1, 200))
def test_fuel_monotone(t, fuel):
    small = normalize(t, fuel)
    big = normalize(t, fuel * 3)
    if isinstance(small, Value):
        assert isinstance(big, Value) and big.term == small.term
    if isinstance(small, Stuck):
        assert isinstance(big, Stuck)


def test_primitives():
    s = Seq((Num(5), K, Num(7)))
    assert nf(App(LEN, s)) == Num(3)
    assert nf(app(PROJ, s, Num(1))) == Num(5)
    assert nf(app(PROJ, s, Num(3))) == Num(7)
    assert nf(app(CAT, s, Seq((S,)))) == Seq((Num(5), K, Num(7), S))
    assert nf(App(SUCC, Num(4))) == Num(5)
    assert nf(app(NCASE, Num(0), K, SUCC)) == K
    assert nf(app(NCASE, Num(3), K, SUCC)) == Num(3)
    assert nf(App(FST, Pair(Num(1), Num(2)))) == Num(1)
    assert nf(App(SND, Pair(Num(1), Num(2)))) == Num(2)
    assert nf(app(pca.UNIT, K)) == Seq((K,))
    assert nf(app(pca.MKPAIR, K, S)) == Pair(K, S)
    assert nf(app(pca.EQ, Num(1), Num(1), K, S)) == K
    assert nf(app(pca.EQ, Num(1), Num(2), K, S)) == S
    double = lam("x", app(CAT, App(pca.UNIT, Var("x")), App(pca.UNIT, Var("x"))))
    assert nf(app(pca.CMAP, double, Seq((Num(1), Num(2))))) == Seq(
        (Num(1), Num(1), Num(2), Num(2)))
    three = app(pca.REC, Num(0), SUCC, Num(3))
    assert nf(three) == Num(3)


@pytest.mark.parametrize("t", [
    App(LEN, Num(1)),
    app(PROJ, Seq((K,)), Num(0)),
    app(PROJ, Seq((K,)), Num(2)),
    App(FST, Seq()),
    App(SUCC, K),
    App(Num(1), Num(2)),
])
def test_primitives_get_stuck_on_bad_input(t):
    assert isinstance(normalize(t), Stuck)


def test_free_variable_is_stuck():
    assert isinstance(normalize(App(I, Var("x"))), Stuck)


@settings(max_examples=200, deadline=None)
@given(terms)
def test_show_parse_round_trip(t):
    assert parse(show(t)) == t


def test_parse_grammar():
    t = parse("(app (app K (num 1)) (seq (pair S K) len))")
    assert t == app(K, Num(1), Seq((Pair(S, K), LEN)))
    assert show(t) == "(app (app K (num 1)) (seq (pair S K) len))"


@pytest.mark.parametrize("text", ["(app K", "(num x)", "(frob K)", "(app K)", ")"])
def test_parse_errors_have_positions(text):
    with pytest.raises(ParseError) as e:
        parse(text)
    assert e.value.pos is not None


body_parts = st.recursive(
    st.sampled_from([Var("x"), K, S, Num(0), Num(1), pca.UNIT]),
    lambda sub: st.tuples(sub, sub).map(lambda p: App(*p)),
    max_leaves=6,
)


@settings(max_examples=200, deadline=None)
@given(body_parts, st.sampled_from([Num(3), K, Seq((Num(1),)), Pair(K, S)]))
def test_abstraction_beta(body, v):
    direct = normalize(pca.substitute(body, "x", v), 2000)
    via = normalize(App(lam("x", body), v), 4000)
    if isinstance(direct, Value):
        assert isinstance(via, Value) and via.term == direct.term


def test_nested_abstraction():
    swap = lam("a", pca.abstract("b", app(Var("b"), Var("a")), bound=("a",)))
    assert nf(app(swap, Num(1), SUCC)) == Num(2)


@settings(max_examples=300, deadline=None)
@given(seq_codes, seq_codes)
def test_order_is_support_inclusion(m, n):
    assert pca.seq_leq(m, n) == (pca.support(m) <= pca.support(n))


@settings(max_examples=200, deadline=None)
@given(seq_codes, seq_codes, seq_codes)
def test_order_is_a_preorder(a, b, c):
    assert pca.seq_leq(a, a)
    if pca.seq_leq(a, b) and pca.seq_leq(b, c):
        assert pca.seq_leq(a, c)
    assert pca.seq_leq(a, pca.seq_concat(a, b))
    assert pca.seq_leq(pca.seq_concat(a, b), pca.seq_concat(b, a))


def test_sequence_helpers():
    s = pca.seq(Num(1), Num(2))
    assert pca.seq_len(s) == 2
    assert pca.seq_proj(s, 2) == Num(2)
    assert pca.numerals(s) == [1, 2]
    assert pca.is_seq(EMPTY) and not pca.is_seq(K)
    with pytest.raises(TypeError):
        pca.numerals(pca.seq(K))


def test_constant_value():
    assert pca.constant_value(App(K, Num(4))) == Num(4)
    assert pca.constant_value(Num(4)) is None
