import random

import pytest
from hypothesis import given, settings, strategies as st

from herbrand import assemblies as asm
from herbrand import suites
from herbrand.finsets import FiniteMap
from herbrand.pca import I, K, Num, S
from herbrand.sexpr import ParseError
from herbrand.sigma import Fails, Holds

A = asm.Assembly.of([0, 1], {Num(0), Num(1)}, {0: [{Num(0)}], 1: [{Num(1)}]}, "A")
B = asm.Assembly.of(["x", "y"], {K, S}, {"x": [{K}], "y": [{S}]}, "B")

seeds = st.integers(0, 10_000)


def test_validation():
    with pytest.raises(ValueError):
        asm.Assembly.of([0], {K}, {0: []})
    with pytest.raises(ValueError):
        asm.Assembly.of([0], {K}, {0: [{S}]})
    with pytest.raises(ValueError):
        asm.Assembly.of([0, 1], {K}, {0: [{K}]})


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_synthesized_trackings_pass(seed):
    rng = random.Random(seed)
    a = suites.random_assembly(rng, rng.randint(0, 3), name="A")
    b = suites.random_assembly(rng, rng.randint(1, 3), name="B")
    fn = {x: rng.choice(b.carrier) for x in a.carrier}
    assert asm.is_tracked(asm.morphism(a, b, fn))


def test_wrong_tracking_fails():
    swap = asm.morphism(A, A, {0: 1, 1: 0}, tracking=I)
    assert isinstance(asm.check_tracking(swap), Fails)
    assert asm.is_tracked(asm.morphism(A, A, {0: 1, 1: 0}))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_category_laws(seed):
    rng = random.Random(seed)
    objs = [suites.random_assembly(rng, rng.randint(1, 3), name=n) for n in "ABCD"]
    f, g, h = (asm.morphism(objs[i], objs[i + 1],
                            {x: rng.choice(objs[i + 1].carrier) for x in objs[i].carrier})
               for i in range(3))
    left = asm.compose(asm.compose(f, g), h)
    right = asm.compose(f, asm.compose(g, h))
    assert left.fn == right.fn
    assert asm.is_tracked(left) and asm.is_tracked(right)
    assert asm.compose(asm.identity(objs[0]), f).fn == f.fn
    assert asm.compose(f, asm.identity(objs[1])).fn == f.fn
    assert asm.is_tracked(asm.identity(objs[0]))


def test_universal_properties_small():
    rep = suites.universal_properties(instances=3, seed=7)
    assert rep.ok, rep.failures()[:3]


def test_products_reject_wrong_cones():
    p = asm.product(A, B)
    f = asm.morphism(A, A, {0: 0, 1: 1})
    with pytest.raises(ValueError):
        p.pairing(f, f)


def test_equalizer_and_coequalizer_shapes():
    f = asm.morphism(A, B, {0: "x", 1: "x"})
    g = asm.morphism(A, B, {0: "x", 1: "y"})
    e = asm.equalizer(f, g)
    assert e.obj.carrier == (0,)
    q = asm.coequalizer(f, g)
    assert len(q.obj.carrier) == 1
    assert asm.is_tracked(e.incl) and asm.is_tracked(q.quotient)


def test_factorization():
    f = asm.morphism(A, B, {0: "x", 1: "x"})
    fac = asm.factorize(f)
    assert isinstance(asm.is_super_epi(fac.super_epi, fac.realizer), Holds)
    assert asm.is_mono(fac.mono)
    assert fac.super_epi.fn.compose(fac.mono.fn) == f.fn


def test_non_surjection_is_not_super_epi():
    f = asm.morphism(A, B, {0: "x", 1: "x"})
    assert isinstance(asm.is_super_epi(f, I), Fails)


def test_exponential():
    e = asm.exponential(A, B)
    assert len(e.obj.carrier) == 4 and not e.excluded
    assert asm.is_tracked(e.evaluation) and asm.is_tracked(e.proj)


# -- natural numbers ------------------------------------------------------------------


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4), st.data())
def test_recursor_matches_iteration(k, data):
    carrier = list(range(k))
    z = asm.Assembly.of(carrier, {Num(i) for i in carrier}, {i: [{Num(i)}] for i in carrier})
    start = data.draw(st.sampled_from(carrier))
    succ = {i: data.draw(st.sampled_from(carrier)) for i in carrier}
    n_max = 12
    rec = asm.nno_recursor(asm.point(z, start), asm.morphism(z, z, succ), n_max)
    value = start
    for n in range(n_max + 1):
        assert rec(n) == value
        value = succ[value]
    assert asm.is_tracked(rec)


def test_nno_shape():
    n = asm.nno(5)
    assert n.carrier == tuple(range(6))
    assert asm.is_partitioned(n)
    assert asm.find_nabla_code(n) is None


# -- indiscrete objects ---------------------------------------------------------------


def test_nabla_and_gamma():
    n = asm.nabla(["a", "b"])
    assert isinstance(asm.nabla_like(n, asm.NABLA_CODE), Holds)
    assert asm.gamma(n) == ("a", "b")
    f = FiniteMap.of(["a", "b"], ["a", "b"], {"a": "b", "b": "b"})
    assert asm.is_tracked(asm.nabla_map(f, n, n))


def test_pretopos_two_by_two():
    cases = asm.pretopos_preservation_suite(range(2), ["a", "b"])
    assert cases and all(c.ok for c in cases), [c for c in cases if not c.ok]


# -- partitioned assemblies ------------------------------------------------------------


def test_cover_and_section():
    p = asm.Assembly.of([0, 1], {Num(0), K}, {0: [{Num(0)}], 1: [{K}]}, "P")
    cov = asm.partitioned_cover(A)
    assert asm.is_partitioned(cov.obj)
    assert isinstance(asm.is_super_epi(cov.proj, cov.realizer), Holds)
    assert asm.is_tracked(cov.proj)
    src = asm.Assembly.of([0, 1, 2], {Num(0), K, S}, {0: [{Num(0)}], 1: [{K}], 2: [{S}]})
    q = asm.morphism(src, p, {0: 0, 1: 1, 2: 1})
    r = asm.synth_cover_realizer(q)
    s = asm.section_of_cover(q, r)
    assert all(q(s(a)) == a for a in p.carrier)
    assert asm.is_tracked(s)


def test_section_needs_partitioned_target():
    q = asm.morphism(A, asm.nabla([0]), {0: 0, 1: 0})
    bad = asm.Assembly.of([0], {K, S}, {0: [{K}, {S}]})
    with pytest.raises(ValueError):
        asm.section_of_cover(asm.morphism(A, bad, {0: 0, 1: 0}), I)
    assert asm.is_tracked(q)


def test_projectivity_small():
    rep = suites.projectivity(instances=10, seed=11)
    assert rep.ok, rep.failures()[:3]


def test_partitioned_stability():
    rep = suites.partitioned_stability(instances=5, seed=2)
    assert rep.ok, rep.failures()[:3]


# -- textual form ------------------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_document_round_trip(seed):
    rng = random.Random(seed)
    a = suites.random_assembly(rng, rng.randint(0, 3), name="A")
    b = suites.random_assembly(rng, rng.randint(1, 3), name="B")
    f = asm.morphism(a, b, {x: rng.choice(b.carrier) for x in a.carrier}, name="f")
    objs, maps = asm.load_document("\n".join([a.to_sexpr(), b.to_sexpr(), f.to_sexpr()]))
    assert objs["A"] == a and objs["B"] == b
    assert maps["f"].fn == f.fn and maps["f"].tracking == f.tracking


def test_structured_labels_round_trip():
    p = asm.product(A, B).obj.renamed("P")
    objs, _ = asm.load_document(p.to_sexpr())
    assert objs["P"] == p


@pytest.mark.parametrize("text", [
    "(assembly A (carrier 0) (realizers K))",
    "(assembly A (carrier 0) (realizers K) (alpha (0 (set S))))",
    "(morphism f (source A) (target A) (map (0 0)))",
    "(frob)",
])
def test_malformed_documents(text):
    with pytest.raises(ParseError):
        asm.load_document(text)
