"""Predicates over finite index sets, realized entailment and its synthesizers.

A predicate assigns a truth value to every label of a finite set.  ``phi``
entails ``psi`` when one term ``r`` sends potential realizers of ``phi(x)`` to
potential realizers of ``psi(x)`` and actual ones to actual ones, uniformly
in ``x``.  The ``synth_*`` functions build such terms for the Heyting
operations and for both quantifier adjunctions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Iterable, Mapping

from . import pca
from . import sigma as sg
from .finsets import (FiniteMap, is_pullback, label_from_sexpr, label_key, show_label,
                      sort_labels)
from .pca import (CAT, CMAP, EMPTY, FST, SND, UNIT, App, I, Num, Pair, Seq, Term, Var, abstract,
                  lam, show)
from .sexpr import ParseError, dump, head, position, read_one
from .sigma import (DEFAULT, HOLDS, ISO, ISO_INV, Atom, Fails, Forall, Holds, ProbeConfig,
                    ProbeLimit, TruthValue, Unknown)

# -- predicates ------------------------------------------------------------


@dataclass(frozen=True)
class Predicate:
    index: tuple
    values: tuple

    @classmethod
    def of(cls, mapping: Mapping) -> "Predicate":
        index = sort_labels(mapping)
        return cls(index, tuple(mapping[x] for x in index))

    @classmethod
    def const(cls, index: Iterable, value: TruthValue) -> "Predicate":
        index = sort_labels(index)
        return cls(index, (value,) * len(index))

    def __call__(self, x) -> TruthValue:
        try:
            return self.values[self.index.index(x)]
        except ValueError:
            raise KeyError(x) from None

    def items(self):
        return zip(self.index, self.values)

    def map(self, fn: Callable[[TruthValue], TruthValue]) -> "Predicate":
        return Predicate(self.index, tuple(fn(v) for v in self.values))

    def to_sexpr(self) -> str:
        idx = " ".join(show_label(x) for x in self.index)
        body = "".join(f" ({show_label(x)} {sg.tv_to_sexpr(v)})" for x, v in self.items())
        return f"(predicate (index {idx}){body})"


def _same_index(phi: Predicate, psi: Predicate):
    if phi.index != psi.index:
        raise ValueError("predicates live on different index sets")


def pointwise(op, phi: Predicate, psi: Predicate) -> Predicate:
    _same_index(phi, psi)
    return Predicate(phi.index, tuple(op(a, b) for a, b in zip(phi.values, psi.values)))


def conj_pred(phi, psi):
    return pointwise(sg.conj, phi, psi)


def disj_pred(phi, psi):
    return pointwise(sg.disj, phi, psi)


def imp_pred(phi, psi):
    return pointwise(sg.imp, phi, psi)


def neg_pred(phi):
    return phi.map(sg.neg)


def top_pred(index):
    return Predicate.const(index, sg.TOP)


def bot_pred(index):
    return Predicate.const(index, sg.BOTTOM)


def reindex(f: FiniteMap, psi: Predicate) -> Predicate:
    """``f* psi = psi . f`` for ``f: Y -> X``."""
    if tuple(f.cod) != psi.index and not set(f.cod) <= set(psi.index):
        raise ValueError("function codomain is not the predicate's index set")
    return Predicate(f.dom, tuple(psi(f(y)) for y in f.dom))


def predicate_from_sexpr(form) -> Predicate:
    if head(form) != "predicate":
        raise ParseError("expected (predicate (index ...) (x value) ...)", position(form))
    index = None
    table = {}
    for item in form[1:]:
        if head(item) == "index":
            index = [label_from_sexpr(x) for x in item[1:]]
        elif isinstance(item, list) and len(item) == 2:
            table[label_from_sexpr(item[0])] = sg.tv_from_sexpr(item[1])
        else:
            raise ParseError(f"bad predicate entry {dump(item)}", position(item))
    if index is None:
        index = list(table)
    if set(index) != set(table):
        raise ParseError("predicate must give a value at exactly the listed labels",
                         position(form))
    return Predicate.of(table)


def parse_predicate(text: str) -> Predicate:
    return predicate_from_sexpr(read_one(text))


# -- entailment checking ----------------------------------------------------


@dataclass(frozen=True)
class ProbeRecord:
    index: object
    clause: str  # "potential" or "actual"
    probe: Term
    result: object

    def __str__(self):
        return f"{show_label(self.index)} {self.clause} {show(self.probe)}: {self.result}"


@dataclass
class EntailmentReport:
    realizer: Term
    potential: object
    actual: object
    transcript: list = field(default_factory=list)

    @property
    def outcome(self):
        """Combined verdict; passing every probe counts as holding."""
        res = sg.conjoin((self.potential, self.actual))
        if sg.passes(res):
            return HOLDS
        return res

    @property
    def holds(self) -> bool:
        return isinstance(self.outcome, Holds)

    def failure(self):
        for r in (self.potential, self.actual):
            if isinstance(r, Fails):
                return r
        return None


def _clause(source, target, member_src, member_tgt, r, x, clause, cfg, log):
    try:
        ps = sg.probes(source, cfg)
    except ProbeLimit:
        log.append(ProbeRecord(x, clause, EMPTY, Unknown("probe-limit")))
        return Unknown("probe-limit")
    results = []
    for n in ps:
        src = member_src(source, n, cfg)
        if not sg.passes(src):
            if isinstance(src, Unknown):
                results.append(Unknown(src.reason))
            continue
        res = pca.apply(r, n, cfg.fuel)
        if isinstance(res, pca.Diverged):
            out = Unknown("fuel")
        elif isinstance(res, pca.Stuck):
            out = Fails(n, f"realizer undefined: {res.reason}", x)
        else:
            tgt = member_tgt(target, res.term, cfg)
            if isinstance(tgt, Fails):
                if isinstance(src, Holds):
                    out = Fails(n, f"sent to {show(res.term)}: {tgt.reason}", x)
                else:
                    out = Unknown("probe-limit")
            else:
                out = tgt
        log.append(ProbeRecord(x, clause, n, out))
        results.append(out)
        if isinstance(out, Fails):
            return out
    return sg.conjoin(results + [Unknown("probe-limit", passed=True)])


def check_entailment(phi: Predicate, psi: Predicate, r: Term,
                     cfg: ProbeConfig = DEFAULT) -> EntailmentReport:
    """Check that ``r`` realizes ``phi <= psi`` on every index and probe."""
    _same_index(phi, psi)
    log: list = []
    pot, act = [], []
    for x, a, b in zip(phi.index, phi.values, psi.values):
        p = _clause(a, b, sg.potential_member, sg.potential_member, r, x, "potential", cfg, log)
        pot.append(p)
        if isinstance(p, Fails):
            break
        q = _clause(a, b, sg.actual_member, sg.actual_member, r, x, "actual", cfg, log)
        act.append(q)
        if isinstance(q, Fails):
            break
    return EntailmentReport(r, sg.conjoin(pot), sg.conjoin(act), log)


def entails(phi: Predicate, psi: Predicate, r: Term, cfg: ProbeConfig = DEFAULT) -> bool:
    return check_entailment(phi, psi, r, cfg).holds


# -- Heyting synthesizers ---------------------------------------------------

_n, _a, _b, _c, _q, _m = (Var(v) for v in "nabcqm")


def _iso(t):
    return App(ISO, t)


def synth_identity() -> Term:
    return I


def synth_compose(r: Term, s: Term) -> Term:
    """Realizer for ``phi <= chi`` from ``r: phi <= psi`` and ``s: psi <= chi``."""
    return lam("n", App(s, App(r, _n)))


def synth_top() -> Term:
    """``phi <= top``."""
    return lam("n", EMPTY)


def synth_bot() -> Term:
    """``bot <= phi``: the only potential realizer of bottom is <>."""
    return I


def synth_fst() -> Term:
    """``phi and psi <= phi``."""
    return lam("n", App(FST, _iso(_n)))


def synth_snd() -> Term:
    return lam("n", App(SND, _iso(_n)))


def synth_pair(r: Term, s: Term) -> Term:
    """``chi <= phi and psi`` from ``r: chi <= phi`` and ``s: chi <= psi``."""
    return lam("n", App(ISO_INV, Pair(App(r, _n), App(s, _n))))


def synth_inl() -> Term:
    """``phi <= phi or psi``."""
    return lam("n", App(ISO_INV, Pair(_n, EMPTY)))


def synth_inr() -> Term:
    return lam("n", App(ISO_INV, Pair(EMPTY, _n)))


def synth_disj_elim(r: Term, s: Term, pair_input: bool = False) -> Term:
    """``phi or psi <= chi`` from ``r: phi <= chi`` and ``s: psi <= chi``.

    The realizer splits its input into its two halves and concatenates
    ``r`` of the first with ``s`` of the second.  With ``pair_input`` it
    expects the pair form ``p a b`` directly instead of a tagged code.
    """
    split = _n if pair_input else _iso(_n)
    return lam("n", pca.app(CAT, App(r, App(FST, split)), App(s, App(SND, split))))


def synth_curry(r: Term) -> Term:
    """``phi <= psi -> chi`` from ``r: phi and psi <= chi``."""
    inner = abstract("b", App(r, App(ISO_INV, Pair(_a, _b))), bound=("a",))
    return lam("a", App(UNIT, inner))


def _apply_all(codes: Term, arg: Term, bound=()) -> Term:
    """``c1 arg * ... * ck arg`` for ``codes = <c1, ..., ck>``."""
    each = abstract("c", App(_c, arg), bound=tuple(bound))
    return pca.app(CMAP, each, codes)


def synth_uncurry(r: Term) -> Term:
    """``phi and psi <= chi`` from ``r: phi <= psi -> chi``."""
    body = _apply_all(App(r, App(FST, _iso(_n))), App(SND, _iso(_n)), bound=("n",))
    return lam("n", body)


def synth_eval() -> Term:
    """``(psi -> chi) and psi <= chi``."""
    return synth_uncurry(I)


def synth_neg_intro(r: Term) -> Term:
    """``phi <= not psi`` from ``r: phi and psi <= bot``."""
    return synth_curry(r)


# -- existential quantifier -------------------------------------------------


def _require_finite_atom(v: TruthValue, where) -> Atom:
    if not isinstance(v, Atom) or not sg.is_finite(v.a1):
        raise ValueError(f"exact quantification needs atoms over finite code sets (at {where!r})")
    return v


def exists_universe(parts: Iterable[Atom], cfg: ProbeConfig = DEFAULT) -> frozenset:
    """Sequence codes with distinct components over each part, of bounded length."""
    out = set()
    for a in parts:
        elems = pca.sort_terms(a.a1)
        limit = max(cfg.probe_len, len(elems))
        for k in range(limit + 1):
            out.update(Seq(p) for p in permutations(elems, k))
    return frozenset(out)


def exists_value(parts: Iterable[TruthValue], cfg: ProbeConfig = DEFAULT) -> Atom:
    parts = [_require_finite_atom(v, i) for i, v in enumerate(parts)]
    universe = exists_universe(parts, cfg)
    gens = [{n} for n in universe
            if any(set(n.items) <= a.a1 and a.gens.covers(frozenset(n.items)) for a in parts)]
    return Atom(universe, sg.Antichain(gens))


def exists_along(f: FiniteMap, phi: Predicate, cfg: ProbeConfig = DEFAULT) -> Predicate:
    """Exact existential image of an atom-valued predicate along ``f: X -> Y``."""
    if set(f.dom) != set(phi.index):
        raise ValueError("function domain is not the predicate's index set")
    return Predicate(f.cod, tuple(exists_value([phi(x) for x in f.fiber(y)], cfg)
                                  for y in f.cod))


def exists_transpose_down(r: Term) -> Term:
    """From ``r: Ef(phi) <= chi`` to ``phi <= f*(chi)``: ``m |-> r <m>``."""
    return lam("m", App(r, App(UNIT, _m)))


def exists_transpose_up(s: Term) -> Term:
    """From ``s: phi <= f*(chi)`` to ``Ef(phi) <= chi``: ``<m1..mk> |-> s m1 * ... * s mk``."""
    return pca.app(CMAP, s)


# -- universal quantifier ---------------------------------------------------


def forall_value(parts: Iterable[TruthValue]) -> Forall:
    uniq = {sg.tv_to_sexpr(p): p for p in parts}
    return Forall(tuple(uniq[k] for k in sorted(uniq)))


def forall_along(f: FiniteMap, phi: Predicate) -> Predicate:
    if set(f.dom) != set(phi.index):
        raise ValueError("function domain is not the predicate's index set")
    return Predicate(f.cod, tuple(forall_value(phi(x) for x in f.fiber(y)) for y in f.cod))


def forall_transpose_up(r: Term) -> Term:
    """From ``r: f*(chi) <= phi`` to ``chi <= Af(phi)``: ``p |-> <S (K r) (K p)>``.

    That component sends any ``d`` to ``r p``; the call ``r p`` is delayed behind the dummy argument, so empty fibres,
    where ``r`` owes nothing, still get a defined code.
    """
    each = pca.app(pca.S, App(pca.K, r), App(pca.K, Var("p")))
    return lam("p", App(UNIT, each))


DUMMY = Num(0)


def forall_transpose_down(s: Term) -> Term:
    """From ``s: chi <= Af(phi)`` to ``f*(chi) <= phi``: apply each component of ``s p`` to 0."""
    each = lam("c", App(_c, DUMMY))
    return lam("p", pca.app(CMAP, each, App(s, Var("p"))))


# -- Beck-Chevalley -----------------------------------------------------------


@dataclass
class BeckChevalleyReport:
    exists_equal: bool
    exists_entailments: list
    forall_entailments: list
    mismatches: list = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return (self.exists_equal and all(r.holds for r in self.exists_entailments)
                and all(r.holds for r in self.forall_entailments))


def beck_chevalley_check(p1: FiniteMap, p2: FiniteMap, f: FiniteMap, g: FiniteMap,
                         phi: Predicate, cfg: ProbeConfig = DEFAULT,
                         with_forall: bool = True) -> BeckChevalleyReport:
    """Compare ``g* Ef phi`` with ``E_p2 p1* phi`` (and likewise for ``A``) on ``Z``.

    The square is ``p1: P -> X``, ``p2: P -> Z``, ``f: X -> Y``, ``g: Z -> Y``.
    """
    if not is_pullback(p1, p2, f, g):
        raise ValueError("square is not a pullback")
    left = reindex(g, exists_along(f, phi, cfg))
    right = exists_along(p2, reindex(p1, phi), cfg)
    mismatches = [z for z in left.index if left(z) != right(z)]
    ex = [check_entailment(left, right, I, cfg), check_entailment(right, left, I, cfg)]
    fa = []
    if with_forall:
        fl = reindex(g, forall_along(f, phi))
        fr = forall_along(p2, reindex(p1, phi))
        fa = [check_entailment(fl, fr, I, cfg), check_entailment(fr, fl, I, cfg)]
    return BeckChevalleyReport(not mismatches, ex, fa, mismatches)


__all__ = [
    "BeckChevalleyReport", "DUMMY", "EntailmentReport", "Predicate", "ProbeRecord",
    "beck_chevalley_check", "bot_pred", "check_entailment", "conj_pred", "disj_pred",
    "entails", "exists_along", "exists_transpose_down", "exists_transpose_up",
    "exists_universe", "exists_value", "forall_along", "forall_transpose_down",
    "forall_transpose_up", "forall_value", "imp_pred", "label_key", "neg_pred",
    "parse_predicate", "pointwise", "predicate_from_sexpr", "reindex", "synth_bot",
    "synth_compose", "synth_curry", "synth_disj_elim", "synth_eval", "synth_fst",
    "synth_identity", "synth_inl", "synth_inr", "synth_neg_intro", "synth_pair",
    "synth_snd", "synth_top", "synth_uncurry", "top_pred",
]
