"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from herbrand import pca, sigma as sg
from herbrand.pca import K, Num, Pair, S, Seq

leaf_codes = st.sampled_from([Num(0), Num(1), Num(2), K, S])

terms = st.recursive(
    st.one_of(st.sampled_from([S, K, pca.LEN, pca.CAT, pca.FST, pca.SND, pca.SUCC]),
              st.integers(0, 5).map(Num)),
    lambda sub: st.one_of(
        st.tuples(sub, sub).map(lambda p: pca.App(*p)),
        st.tuples(sub, sub).map(lambda p: Pair(*p)),
        st.lists(sub, max_size=3).map(Seq),
    ),
    max_leaves=10,
)

sk_terms = st.recursive(
    st.sampled_from([S, K]),
    lambda sub: st.tuples(sub, sub).map(lambda p: pca.App(*p)),
    max_leaves=12,
)

seq_codes = st.lists(leaf_codes, max_size=4).map(Seq)


@st.composite
def atoms(draw, pool=(Num(0), Num(1), K), max_size=2):
    a1 = draw(st.lists(st.sampled_from(pool), max_size=max_size, unique=True))
    gens = draw(st.lists(st.lists(st.sampled_from(a1), unique=True), max_size=3)) if a1 else \
        draw(st.sampled_from([[], [[]]]))
    return sg.mk_atom(gens, a1)
