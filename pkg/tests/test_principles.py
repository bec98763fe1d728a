import pytest
from hypothesis import given, settings, strategies as st

from herbrand import assemblies as asm
from herbrand import pca, principles as pr, sigma as sg, suites
from herbrand.pca import Num, Seq
from herbrand.sexpr import ParseError
from herbrand.sigma import Holds

tables = st.lists(st.integers(0, 16), min_size=1, max_size=17)


def test_upto():
    assert pca.apply(pr.UPTO, Num(3)).term == Seq(tuple(Num(i) for i in range(4)))


@settings(max_examples=60, deadline=None)
@given(tables)
def test_bound_round_trip(g):
    r = pr.tracking_from_bound(g)
    assert pr.bound_from_tracking(r, len(g) - 1) == tuple(g)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=1, max_size=6), st.data())
def test_bounded_functions_are_tracked(g, data):
    f = [data.draw(st.integers(0, v)) for v in g]
    assert asm.is_tracked(pr.bounded_morphism(f, g))


def test_bound_violation_rejected():
    with pytest.raises(ValueError):
        pr.BoundedFunction((3,), (2,))


def test_tracking_that_is_not_a_bound():
    with pytest.raises(pr.BoundError):
        pr.bound_from_tracking(pca.I, 2)


def test_table_term_repeats_last_value():
    t = pr.table_term([4, 2])
    assert [pca.apply(t, Num(n)).term for n in range(4)] == [Num(4), Num(2), Num(2), Num(2)]


# -- weak excluded middle ---------------------------------------------------------------


def test_wlem_on_all_small_atoms():
    for a in suites.all_atoms():
        assert isinstance(pr.wlem_check(a), Holds)
        inh = bool(a.gens)
        assert pr.wlem_sides(a) == (not inh, inh)


def test_wlem_formula_shape():
    a = sg.TOP
    assert pr.wlem_formula(a) == sg.Or(sg.Not(a), sg.Not(sg.Not(a)))
    assert pr.wlem_realizer() == pca.Pair(sg.NN_WITNESS, sg.NN_WITNESS)


# -- trees -------------------------------------------------------------------------------


def test_tree_validation():
    with pytest.raises(ValueError):
        pr.FiniteTree(frozenset({(), (0, 0)}), 2)
    with pytest.raises(ValueError):
        pr.FiniteTree(frozenset({(0,)}), 1)
    with pytest.raises(ValueError):
        pr.FiniteTree(frozenset({(), (3,)}), 1, (((), 1),))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 4))
def test_full_tree_paths(branching, depth):
    t = pr.full_tree(branching, depth)
    assert len(t.paths()) == branching ** depth
    assert pr.level_bounds(t, depth) == (branching - 1,) * depth


def test_koenig():
    path, r = pr.koenig_path(pr.comb_tree(4), 4)
    assert path == (0, 0, 0, 0)
    assert pr.path_tracked(r, path)
    with pytest.raises(ValueError):
        pr.koenig_path(pr.full_tree(2, 2), 4)


def test_uniform_realizer_tracks_every_path():
    t = pr.level_bound_tree(4)
    r = pr.uniform_path_realizer(t, 4)
    assert all(pr.path_tracked(r, p) for p in t.paths())


def test_fan_extraction_and_rejection():
    t = pr.full_tree(2, 3)
    for d in (1, 2, 3):
        assert pr.fan_bound_extract(pr.length_bar(t, d, [d])) == d
        with pytest.raises(pr.BarViolation) as e:
            pr.fan_bound_extract(pr.length_bar(t, d, [d - 1]))
        assert len(e.value.path) == d - 1


def test_bar_must_be_inherited():
    t = pr.full_tree(2, 2)
    with pytest.raises(ValueError):
        pr.BarData(t, frozenset({(0,)}), (1,))


def test_tree_text_round_trip():
    t = pr.level_bound_tree(3)
    trees, _ = pr.load_trees(t.to_sexpr("L"))
    assert trees["L"] == t


def test_bar_file():
    text = (pr.full_tree(2, 2).to_sexpr("T")
            + "\n(bar b (tree T) (holds (0 0) (0 1) (1) (1 0) (1 1)) (payload 2))")
    _, bars = pr.load_trees(text)
    assert pr.fan_bound_extract(bars["b"]) == 2


@pytest.mark.parametrize("text", [
    "(tree T (depth x) (nodes ()))",
    "(tree T (nodes (0)))",
    "(bar b (tree Missing) (length-at-least 1) (payload 1))",
])
def test_malformed_tree_files(text):
    with pytest.raises(ParseError):
        pr.load_trees(text)
