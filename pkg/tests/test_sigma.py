from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from herbrand import pca, sigma as sg
from herbrand.pca import EMPTY, I, K, Num, S, Seq
from herbrand.sigma import (ALL, BOTTOM, TOP, Antichain, Fails, Holds, ProbeConfig, Unknown,
                            actual_member, mk_atom, passes, potential_member)
from strategies import atoms

POOL = (Num(0), Num(1), K)


def codes_over(elems, max_len):
    out = [EMPTY]
    for k in range(1, max_len + 1):
        out += [Seq(p) for p in product(elems, repeat=k)]
    return out


def is_holds(r):
    return isinstance(r, Holds)


# -- antichains -----------------------------------------------------------------------

family = st.lists(st.frozensets(st.sampled_from(POOL)), max_size=5)


@settings(max_examples=300, deadline=None)
@given(family, st.frozensets(st.sampled_from(POOL)))
def test_antichain_keeps_the_up_closure(sets, supp):
    a = Antichain(sets)
    assert a.covers(supp) == any(s <= supp for s in sets)


@settings(max_examples=300, deadline=None)
@given(family)
def test_antichain_members_are_minimal_and_incomparable(sets):
    a = Antichain(sets)
    minimal = {s for s in sets if not any(o < s for o in sets)}
    assert set(a.members) == minimal
    assert all(not (x < y) for x in a.members for y in a.members)


def test_antichain_union():
    a = Antichain([{K}])
    b = Antichain([{K, S}, {Num(0)}])
    assert a.union(b) == Antichain([{K}, {Num(0)}])


# -- atoms ----------------------------------------------------------------------------


def atom_oracle(a, m):
    """Brute force: potential iff every component lies in A1; actual iff also covering."""
    if not isinstance(m, Seq):
        return False, False
    pot = all(sg.codes_contain(a.a1, c) for c in m.items)
    return pot, pot and any(g <= set(m.items) for g in a.gens.members)


@settings(max_examples=200, deadline=None)
@given(atoms())
def test_atom_membership_matches_oracle(a):
    for m in codes_over(POOL + (S,), 2):
        pot, act = atom_oracle(a, m)
        assert is_holds(potential_member(a, m)) == pot
        assert is_holds(actual_member(a, m)) == act


@settings(max_examples=200, deadline=None)
@given(atoms(), st.lists(st.sampled_from(POOL), max_size=3),
       st.lists(st.sampled_from(POOL), max_size=2))
def test_actual_realizers_are_upward_closed(a, m, extra):
    m, n = Seq(m), Seq(m + extra)
    if is_holds(actual_member(a, m)) and is_holds(potential_member(a, n)):
        assert is_holds(actual_member(a, n))


def test_generators_must_lie_in_a1():
    with pytest.raises(ValueError):
        mk_atom([[K]], [Num(0)])


def test_top_and_bottom():
    assert is_holds(actual_member(TOP, EMPTY))
    assert is_holds(actual_member(TOP, Seq((S, K))))
    assert is_holds(potential_member(BOTTOM, EMPTY))
    assert isinstance(actual_member(BOTTOM, EMPTY), Fails)
    assert sg.inhabited(TOP) and not sg.inhabited(BOTTOM)


# -- connectives against brute force -----------------------------------------------------


def split_by_tag(m):
    xs = [c.right for c in m.items if c.left == Num(0)]
    ys = [c.right for c in m.items if c.left == Num(1)]
    return Seq(xs), Seq(ys)


def tagged_codes(a, b, max_len=2):
    elems = [sg.tag0(x) for x in sorted(a.a1, key=pca.term_key)] + \
            [sg.tag1(y) for y in sorted(b.a1, key=pca.term_key)] + [sg.tag0(S)]
    return codes_over(elems, max_len)


@settings(max_examples=150, deadline=None)
@given(atoms(), atoms())
def test_conjunction_matches_oracle(a, b):
    c = sg.conj(a, b)
    for m in tagged_codes(a, b):
        x, y = split_by_tag(m)
        pa, qa = atom_oracle(a, x)
        pb, qb = atom_oracle(b, y)
        assert is_holds(potential_member(c, m)) == (pa and pb)
        assert is_holds(actual_member(c, m)) == (qa and qb)


@settings(max_examples=150, deadline=None)
@given(atoms(), atoms())
def test_disjunction_matches_oracle(a, b):
    d = sg.disj(a, b)
    for m in tagged_codes(a, b):
        x, y = split_by_tag(m)
        pa, qa = atom_oracle(a, x)
        pb, qb = atom_oracle(b, y)
        assert is_holds(potential_member(d, m)) == (pa and pb)
        assert is_holds(actual_member(d, m)) == (pa and pb and (qa or qb))


@settings(max_examples=100, deadline=None)
@given(atoms(), atoms())
def test_symbolic_and_agrees_with_flattened(a, b):
    flat, sym = sg.conj(a, b), sg.And(a, b)
    for m in tagged_codes(a, b):
        assert passes(actual_member(flat, m)) == passes(actual_member(sym, m))


def test_implication_identity_code():
    a = mk_atom([[Num(0)]], [Num(0), Num(1)])
    assert passes(actual_member(sg.Imp(a, a), Seq((I,))))
    b = mk_atom([[Num(1)]], [Num(0), Num(1)])
    assert isinstance(actual_member(sg.Imp(a, b), Seq((I,))), Fails)


@settings(max_examples=200, deadline=None)
@given(atoms())
def test_double_negation_witness(a):
    inhabited = bool(a.gens)
    assert sg.nn_actual_inhabited(a) == inhabited
    r = actual_member(sg.Not(sg.Not(a)), sg.NN_WITNESS)
    assert passes(r) == inhabited


def test_negation_has_the_two_case_description():
    a = mk_atom([[K]], [K])
    assert not sg.inhabited(sg.Not(a))
    assert sg.inhabited(sg.Not(mk_atom([], [K])))


def test_nesting_past_the_budget_is_unknown():
    a = mk_atom([[Num(0)]], [Num(0)])
    t = a
    for _ in range(5):
        t = sg.Imp(t, a)
    with pytest.raises(sg.ProbeLimit):
        sg.probes(t, ProbeConfig(imp_depth=3))
    with pytest.raises(sg.Undecidable):
        sg.inhabited(t, ProbeConfig(imp_depth=3))


def test_probe_sets_are_capped():
    a = mk_atom([[Num(i)] for i in range(20)], [Num(i) for i in range(20)])
    assert len(sg.probes(a, ProbeConfig(max_probes=50))) == 50


def test_outcome_combinators():
    f = Fails(K, "no")
    assert sg.conjoin([sg.HOLDS, Unknown("fuel"), f]) == f
    assert isinstance(sg.conjoin([sg.HOLDS, Unknown("fuel")]), Unknown)
    assert sg.disjoin([f, sg.HOLDS]) == sg.HOLDS
    assert passes(Unknown("probe-limit", passed=True))
    assert not passes(Unknown("fuel"))


# -- exponential isomorphism, exhaustive on a small instance -----------------------------


def test_iso_terms_agree_with_meta_split():
    iso, inv = sg.exp_iso()
    elems = [sg.tag0(Num(0)), sg.tag0(K), sg.tag1(Num(1))]
    for m in codes_over(elems, 3):
        r = pca.apply(iso, m).term
        assert (r.left, r.right) == sg.iso_split(m)
        back = pca.apply(inv, r).term
        assert pca.seq_leq(back, m) and pca.seq_leq(m, back)


# -- textual form ------------------------------------------------------------------------

values = st.recursive(
    atoms() | st.sampled_from([TOP, BOTTOM]),
    lambda sub: st.one_of(
        st.tuples(sub, sub).map(lambda p: sg.And(*p)),
        st.tuples(sub, sub).map(lambda p: sg.Or(*p)),
        st.tuples(sub, sub).map(lambda p: sg.imp(*p)),
        sub.map(sg.Not),
        st.lists(sub, max_size=2).map(lambda ps: sg.Forall(tuple(ps))),
    ),
    max_leaves=4,
)


@settings(max_examples=200, deadline=None)
@given(values)
def test_truth_value_round_trip(t):
    assert sg.parse_tv(sg.tv_to_sexpr(t)) == t


def test_code_set_forms_round_trip():
    for codes in [ALL, sg.tagged(frozenset({K}), ALL), sg.tensor(frozenset({K}), frozenset({S})),
                  sg.bang(frozenset({Num(0)}))]:
        a = sg.Atom(codes, Antichain([]))
        assert sg.parse_tv(sg.tv_to_sexpr(a)) == a
