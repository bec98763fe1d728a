"""Finite-carrier Herbrand assemblies, tracked maps and their constructions.

An assembly gives every element of a finite carrier an inhabited upward
closed family of codes over a code set, stored as an antichain.  A function
is a morphism when some term tracks it: the term sends codes to codes and
realizers of ``a`` to realizers of ``f a``.  Every construction below builds
its structure maps together with tracking terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Iterable, Mapping

from . import pca
from . import sigma as sg
from .finsets import (FiniteMap, label_from_sexpr, label_key, show_label, sort_labels)
from .pca import (CAT, CMAP, EMPTY, EQ, FST, LEN, NCASE, REC, SND, UNIT, App, I, K, Num, Pair,
                  Seq, Term, Var, abstract, lam, show, sort_terms)
from .sexpr import ParseError, dump, head, position, read_all
from .sigma import (ALL, DEFAULT, HOLDS, ISO, ISO_INV, Antichain, Atom, Fails, Holds,
                    ProbeConfig, ProbeLimit, Unknown)
from .tripos import Predicate, check_entailment, synth_disj_elim, synth_fst, synth_snd

# -- objects and maps -------------------------------------------------------


@dataclass(frozen=True)
class Assembly:
    carrier: tuple
    codes: object
    alpha: tuple  # Antichain per carrier element, aligned with ``carrier``
    name: str = ""

    @classmethod
    def of(cls, carrier: Iterable, codes, alpha: Mapping, name: str = "") -> "Assembly":
        carrier = sort_labels(carrier)
        if codes is not ALL and not isinstance(codes, (sg.Tagged, sg.Tensor, sg.Bang)):
            codes = frozenset(codes)
        if set(alpha) != set(carrier):
            raise ValueError("alpha must be given at exactly the carrier elements")
        fams = []
        for a in carrier:
            gens = alpha[a]
            gens = gens if isinstance(gens, Antichain) else Antichain(gens)
            if not gens:
                raise ValueError(f"realizers of {show_label(a)} must be inhabited")
            for g in gens:
                for t in g:
                    if not sg.codes_contain(codes, t):
                        raise ValueError(f"generator element {show(t)} is outside the code set")
            fams.append(gens)
        return cls(carrier, codes, tuple(fams), name)

    def __post_init__(self):
        object.__setattr__(self, "_pos", {a: i for i, a in enumerate(self.carrier)})

    def realizers(self, a) -> Antichain:
        return self.alpha[self._pos[a]]

    def atom(self, a) -> Atom:
        return Atom(self.codes, self.realizers(a))

    def predicate(self) -> Predicate:
        return Predicate(self.carrier, tuple(self.atom(a) for a in self.carrier))

    def generator_code(self, a) -> Seq:
        """Canonical code of the first generator of ``alpha(a)``."""
        return Seq(sort_terms(self.realizers(a).members[0]))

    def restrict(self, subset: Iterable, name: str = "") -> "Assembly":
        keep = sort_labels(subset)
        return Assembly(keep, self.codes, tuple(self.realizers(a) for a in keep), name)

    def renamed(self, name: str) -> "Assembly":
        return Assembly(self.carrier, self.codes, self.alpha, name)

    def same_structure(self, other: "Assembly") -> bool:
        return (self.carrier, self.codes, self.alpha) == (other.carrier, other.codes, other.alpha)

    def to_sexpr(self) -> str:
        body = []
        for a in self.carrier:
            sets = "".join(" (set" + "".join(" " + show(t) for t in sort_terms(g)) + ")"
                           for g in self.realizers(a))
            body.append(f"({show_label(a)}{sets})")
        name = self.name or "A"
        carrier = "".join(" " + show_label(a) for a in self.carrier)
        alpha = "".join(" " + b for b in body)
        return (f"(assembly {name} (carrier{carrier})"
                f" (realizers {sg.a1_to_items(self.codes)}) (alpha{alpha}))")


@dataclass(frozen=True)
class Morphism:
    source: Assembly
    target: Assembly
    fn: FiniteMap
    tracking: Term
    name: str = ""

    def __call__(self, a):
        return self.fn(a)

    def verify(self, cfg: ProbeConfig = DEFAULT):
        return check_tracking(self, cfg)

    @property
    def status(self):
        return check_tracking(self)

    def to_sexpr(self) -> str:
        pairs = "".join(f" ({show_label(a)} {show_label(b)})" for a, b in self.fn.pairs)
        return (f"(morphism {self.name or 'f'} (source {self.source.name or 'A'})"
                f" (target {self.target.name or 'B'}) (map{pairs}) (tracking {show(self.tracking)}))")


def morphism(source: Assembly, target: Assembly, table, tracking: Term | None = None,
             name: str = "") -> Morphism:
    """Build a morphism; the tracking defaults to a synthesized one."""
    if isinstance(table, FiniteMap):
        fn = FiniteMap.of(source.carrier, target.carrier, table.table)
    elif callable(table) and not isinstance(table, Mapping):
        fn = FiniteMap.of(source.carrier, target.carrier, fn=table)
    else:
        fn = FiniteMap.of(source.carrier, target.carrier, table)
    if tracking is None:
        tracking = synth_tracking(source, target, fn)
    return Morphism(source, target, fn, tracking, name)


def identity(a: Assembly) -> Morphism:
    return Morphism(a, a, FiniteMap.of(a.carrier, a.carrier, fn=lambda x: x), I)


def compose(f: Morphism, g: Morphism) -> Morphism:
    """``g`` after ``f``, tracked by ``m |-> n_g (n_f m)``."""
    if f.target.carrier != g.source.carrier or f.target.codes != g.source.codes:
        raise ValueError("morphisms are not composable")
    return Morphism(f.source, g.target, f.fn.compose(g.fn),
                    lam("m", App(g.tracking, App(f.tracking, Var("m")))))


def _empty_atom(codes) -> Atom:
    return Atom(codes, Antichain())


def tracking_report(f: Morphism, cfg: ProbeConfig = DEFAULT):
    """Probe transcript for ``f.tracking`` against ``f.fn``."""
    src, tgt = f.source, f.target
    phi = src.predicate()
    psi = Predicate(src.carrier, tuple(tgt.atom(f.fn(a)) for a in src.carrier))
    if not src.carrier:
        phi = Predicate(("*",), (_empty_atom(src.codes),))
        psi = Predicate(("*",), (_empty_atom(tgt.codes),))
    return check_entailment(phi, psi, f.tracking, cfg)


def check_tracking(f: Morphism, cfg: ProbeConfig = DEFAULT):
    """Does ``f.tracking`` track ``f.fn``?  Passing every probe counts as holding."""
    return tracking_report(f, cfg).outcome


def is_tracked(f: Morphism, cfg: ProbeConfig = DEFAULT) -> bool:
    return isinstance(check_tracking(f, cfg), Holds)


# -- in-pca helpers for synthesized trackings -------------------------------


def _member_test(e: Term, code: Term, yes: Term, no: Term) -> Term:
    """``yes`` if ``e`` occurs in the sequence ``code``, else ``no``."""
    hits = pca.app(CMAP, abstract("c", pca.app(EQ, Var("c"), e, Seq((Num(0),)), EMPTY)), code)
    return pca.app(NCASE, App(LEN, hits), no, App(K, yes))


def _subset_test(elems: Iterable[Term], code: Term, yes: Term, no: Term) -> Term:
    out = yes
    for e in reversed(sort_terms(elems)):
        out = _member_test(e, code, out, no)
    return out


def _lookup(table: list) -> Term:
    """``c |-> result`` for the first matching key, ``<>`` otherwise."""
    body = EMPTY
    for key, result in reversed(table):
        body = pca.app(EQ, Var("c"), key, result, body)
    return lam("c", body)


def synth_tracking(source: Assembly, target: Assembly, fn: FiniteMap) -> Term:
    """A tracking built from generator tables.

    Each code element occurring in a generator of ``alpha(a)`` is sent to the
    first generator of ``beta(f a)``; the outputs are concatenated.  Elements
    of empty generators contribute unconditionally.
    """
    uncond: list = []
    table: dict = {}
    for a in source.carrier:
        w = list(target.generator_code(fn(a)).items)
        for g in source.realizers(a):
            if not g:
                uncond += [x for x in w if x not in uncond]
            for e in g:
                row = table.setdefault(e, [])
                row += [x for x in w if x not in row]
    rows = [(e, Seq(table[e])) for e in sort_terms(table)]
    body = pca.app(CMAP, _lookup(rows), Var("m"))
    if uncond:
        body = pca.app(CAT, Seq(uncond), body)
    return pca.canonical(lam("m", body))


def synth_cover_realizer(f: Morphism) -> Term:
    """A super-epi realizer for a surjective ``f``: pick a preimage per target generator."""
    if not f.fn.is_surjective():
        raise ValueError("only surjections have super-epi realizers")
    src, tgt = f.source, f.target
    uncond: list = []
    cases = []
    for a in tgt.carrier:
        b = f.fn.fiber(a)[0]
        w = src.generator_code(b)
        for g in tgt.realizers(a):
            if not g:
                uncond += [x for x in w.items if x not in uncond]
            else:
                cases.append((g, w))
    m = Var("n")
    body = Seq(uncond)
    for g, w in reversed(cases):
        body = pca.app(CAT, _subset_test(g, m, w, EMPTY), body)
    return pca.canonical(lam("n", body))


# -- super epis and factorization --------------------------------------------


def is_super_epi(f: Morphism, r: Term, cfg: ProbeConfig = DEFAULT):
    """``r`` maps target codes to source codes and realizers of ``a`` into some fibre realizer."""
    src, tgt = f.source, f.target
    any_atom = Atom(tgt.codes, Antichain())
    try:
        probes = sg.probes(any_atom, cfg)
    except ProbeLimit:
        return Unknown("probe-limit")
    results = []
    for n in probes:
        res = pca.apply(r, n, cfg.fuel)
        if isinstance(res, pca.Diverged):
            results.append(Unknown("fuel"))
            continue
        if isinstance(res, pca.Stuck):
            return Fails(n, f"undefined: {res.reason}")
        pot = sg.potential_member(Atom(src.codes, Antichain()), res.term, cfg)
        if isinstance(pot, Fails):
            return Fails(n, f"sent outside the source codes: {pot.reason}")
    for a in tgt.carrier:
        at = tgt.atom(a)
        fiber = f.fn.fiber(a)
        for n in sg.probes(at, cfg):
            if not isinstance(sg.actual_member(at, n, cfg), Holds):
                continue
            res = pca.apply(r, n, cfg.fuel)
            if not isinstance(res, pca.Value):
                results.append(Unknown("fuel"))
                continue
            if not any(isinstance(sg.actual_member(src.atom(b), res.term, cfg), Holds)
                       for b in fiber):
                return Fails(n, f"no preimage of {show_label(a)} realized by {show(res.term)}", a)
    if any(isinstance(x, Unknown) for x in results):
        return sg.conjoin(results)
    return HOLDS


def is_mono(f: Morphism) -> bool:
    return f.fn.is_injective()


@dataclass(frozen=True)
class Factorization:
    super_epi: Morphism
    mono: Morphism
    realizer: Term  # witnesses that ``super_epi`` is a super epi


def factorize(f: Morphism) -> Factorization:
    """Image factorization: realizers of an image point are those of its preimages."""
    src, tgt = f.source, f.target
    image = f.fn.image()
    gamma = {c: Antichain(g for b in f.fn.fiber(c) for g in src.realizers(b)) for c in image}
    mid = Assembly.of(image, src.codes, gamma, f"im({f.name or 'f'})")
    e = Morphism(src, mid, FiniteMap.of(src.carrier, image, f.fn.table), I)
    m = Morphism(mid, tgt, FiniteMap.of(image, tgt.carrier, fn=lambda c: c), f.tracking)
    return Factorization(e, m, I)


# -- finite limits ------------------------------------------------------------


def terminal() -> Assembly:
    return Assembly(("*",), ALL, (Antichain([frozenset()]),), "1")


def to_terminal(a: Assembly) -> Morphism:
    one = terminal()
    return Morphism(a, one, FiniteMap.of(a.carrier, one.carrier, fn=lambda _: "*"),
                    lam("m", EMPTY))


def _conj_gens(x: Antichain, y: Antichain) -> Antichain:
    return Antichain(frozenset(sg.tag0(s) for s in g) | frozenset(sg.tag1(t) for t in h)
                     for g in x for h in y)


@dataclass(frozen=True)
class Product:
    obj: Assembly
    fst: Morphism
    snd: Morphism

    def pairing(self, f: Morphism, g: Morphism) -> Morphism:
        """Unique mediator of a cone ``(f, g)``."""
        c = f.source
        fn = FiniteMap.of(c.carrier, self.obj.carrier, fn=lambda x: (f(x), g(x)))
        return Morphism(c, self.obj, fn, lam("n", App(ISO_INV, Pair(App(f.tracking, Var("n")),
                                                                       App(g.tracking, Var("n"))))))


def product(a: Assembly, b: Assembly) -> Product:
    carrier = [(x, y) for x in a.carrier for y in b.carrier]
    codes = sg.tagged(a.codes, b.codes)
    alpha = {(x, y): _conj_gens(a.realizers(x), b.realizers(y)) for x, y in carrier}
    obj = Assembly.of(carrier, codes, alpha, f"({a.name or 'A'}x{b.name or 'B'})")
    p1 = Morphism(obj, a, FiniteMap.of(obj.carrier, a.carrier, fn=lambda xy: xy[0]), synth_fst())
    p2 = Morphism(obj, b, FiniteMap.of(obj.carrier, b.carrier, fn=lambda xy: xy[1]), synth_snd())
    return Product(obj, p1, p2)


@dataclass(frozen=True)
class Equalizer:
    obj: Assembly
    incl: Morphism

    def mediate(self, h: Morphism) -> Morphism:
        return Morphism(h.source, self.obj,
                        FiniteMap.of(h.source.carrier, self.obj.carrier, h.fn.table), h.tracking)


def _parallel(f: Morphism, g: Morphism):
    if (f.source.carrier, f.target.carrier) != (g.source.carrier, g.target.carrier):
        raise ValueError("maps are not parallel")


def equalizer(f: Morphism, g: Morphism) -> Equalizer:
    _parallel(f, g)
    keep = [b for b in f.source.carrier if f(b) == g(b)]
    obj = f.source.restrict(keep, f"eq({f.name or 'f'},{g.name or 'g'})")
    return Equalizer(obj, Morphism(obj, f.source,
                                   FiniteMap.of(keep, f.source.carrier, fn=lambda b: b), I))


@dataclass(frozen=True)
class Pullback:
    obj: Assembly
    p1: Morphism
    p2: Morphism


def pullback(f: Morphism, g: Morphism) -> Pullback:
    """Pullback of ``f: X -> Z`` and ``g: Y -> Z`` as a part of the product."""
    prod = product(f.source, g.source)
    keep = [(x, y) for x, y in prod.obj.carrier if f(x) == g(y)]
    obj = prod.obj.restrict(keep, "pb")
    p1 = Morphism(obj, f.source, FiniteMap.of(keep, f.source.carrier, fn=lambda xy: xy[0]),
                  prod.fst.tracking)
    p2 = Morphism(obj, g.source, FiniteMap.of(keep, g.source.carrier, fn=lambda xy: xy[1]),
                  prod.snd.tracking)
    return Pullback(obj, p1, p2)


# -- colimits -----------------------------------------------------------------


def initial() -> Assembly:
    return Assembly((), ALL, (), "0")


def from_initial(a: Assembly) -> Morphism:
    return Morphism(initial(), a, FiniteMap.of((), a.carrier, {}), lam("m", EMPTY))


@dataclass(frozen=True)
class Sum:
    obj: Assembly
    inl: Morphism
    inr: Morphism

    def copair(self, f: Morphism, g: Morphism) -> Morphism:
        """Unique mediator of a cocone ``(f, g)``."""
        d = f.target
        table = {(0, x): f(x) for x in f.source.carrier}
        table.update({(1, y): g(y) for y in g.source.carrier})
        return Morphism(self.obj, d, FiniteMap.of(self.obj.carrier, d.carrier, table),
                        synth_disj_elim(f.tracking, g.tracking))


def sum_(a: Assembly, b: Assembly) -> Sum:
    """Coproduct; a realizer of a left element has an unconstrained right half."""
    carrier = [(0, x) for x in a.carrier] + [(1, y) for y in b.carrier]
    codes = sg.tagged(a.codes, b.codes)
    alpha = {(0, x): Antichain(frozenset(sg.tag0(t) for t in g) for g in a.realizers(x))
             for x in a.carrier}
    alpha.update({(1, y): Antichain(frozenset(sg.tag1(t) for t in g) for g in b.realizers(y))
                  for y in b.carrier})
    obj = Assembly.of(carrier, codes, alpha, f"({a.name or 'A'}+{b.name or 'B'})")
    inl = Morphism(a, obj, FiniteMap.of(a.carrier, obj.carrier, fn=lambda x: (0, x)),
                   lam("m", App(ISO_INV, Pair(Var("m"), EMPTY))))
    inr = Morphism(b, obj, FiniteMap.of(b.carrier, obj.carrier, fn=lambda y: (1, y)),
                   lam("m", App(ISO_INV, Pair(EMPTY, Var("m")))))
    return Sum(obj, inl, inr)


@dataclass(frozen=True)
class Coequalizer:
    obj: Assembly
    quotient: Morphism

    def mediate(self, h: Morphism) -> Morphism:
        """Factor ``h`` (with ``h f = h g``) through the quotient."""
        table = {}
        for b in self.quotient.source.carrier:
            c = self.quotient(b)
            if c in table and table[c] != h(b):
                raise ValueError("map does not coequalize the pair")
            table[c] = h(b)
        return Morphism(self.obj, h.target,
                        FiniteMap.of(self.obj.carrier, h.target.carrier, table), h.tracking)


def set_quotient(elements: Iterable, pairs: Iterable) -> dict:
    """Least equivalence containing ``pairs``; each element maps to its least class member."""
    parent = {x: x for x in elements}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in pairs:
        rx, ry = find(x), find(y)
        if rx != ry:
            lo, hi = sorted((rx, ry), key=label_key)
            parent[hi] = lo
    classes: dict = {}
    for x in parent:
        classes.setdefault(find(x), []).append(x)
    rep = {}
    for members in classes.values():
        least = min(members, key=label_key)
        for x in members:
            rep[x] = least
    return rep


def coequalizer(f: Morphism, g: Morphism) -> Coequalizer:
    _parallel(f, g)
    b = f.target
    rep = set_quotient(b.carrier, ((f(x), g(x)) for x in f.source.carrier))
    carrier = sort_labels(rep.values())
    gamma = {c: Antichain(gen for x in b.carrier if rep[x] == c for gen in b.realizers(x))
             for c in carrier}
    obj = Assembly.of(carrier, b.codes, gamma, f"coeq({f.name or 'f'},{g.name or 'g'})")
    q = Morphism(b, obj, FiniteMap.of(b.carrier, carrier, rep), I)
    return Coequalizer(obj, q)


# -- dependent products ---------------------------------------------------------


def eval_realizer() -> Term:
    """``p(<n1..nk>, m) |-> n1 m * ... * nk m`` on the plain pair form."""
    z = Var("z")
    each = abstract("n", App(Var("n"), App(SND, z)), bound=("z",))
    return lam("z", pca.app(CMAP, each, App(FST, z)))


def _eval_tracking() -> Term:
    """Evaluation on tagged codes: undo both tag layers, then apply each tracking."""
    z = Var("z")
    split = App(ISO, z)
    trackings = App(SND, App(ISO, App(FST, split)))
    each = abstract("n", App(Var("n"), App(SND, split)), bound=("z",))
    return lam("z", pca.app(CMAP, each, trackings))


@dataclass(frozen=True)
class DependentProduct:
    obj: Assembly
    proj: Morphism  # to the base
    evaluation: Morphism  # from the pullback along the base map to the family
    sections: dict  # carrier element -> (base point, section table)
    trackings: dict  # carrier element -> tracking term of the section
    excluded: tuple  # sections dropped because no tracking passed


def _section_label(a, t: dict):
    return (a, tuple((b, t[b]) for b in sort_labels(t)))


def pi_along(f: Morphism, g: Morphism, cfg: ProbeConfig = DEFAULT) -> DependentProduct:
    """Right adjoint to pulling back along ``f: B -> A``, applied to ``g: S -> B``."""
    if f.source.carrier != g.target.carrier:
        raise ValueError("g must land in the source of f")
    a_obj, b_obj, s_obj = f.target, f.source, g.source
    carrier, alpha, sections, tracks, excluded = [], {}, {}, {}, []
    for a in a_obj.carrier:
        fiber = f.fn.fiber(a)
        fiber_obj = b_obj.restrict(fiber)
        choices = [g.fn.fiber(b) for b in fiber]
        for pick in cartesian(*choices):
            t = dict(zip(fiber, pick))
            label = _section_label(a, t)
            fn = FiniteMap.of(fiber, s_obj.carrier, t)
            n = synth_tracking(fiber_obj, s_obj, fn)
            if not isinstance(check_tracking(Morphism(fiber_obj, s_obj, fn, n), cfg), Holds):
                excluded.append(label)
                continue
            carrier.append(label)
            sections[label] = (a, t)
            tracks[label] = n
    pool = frozenset(tracks.values())
    codes = sg.tagged(a_obj.codes, pool)
    for label, (a, _) in sections.items():
        alpha[label] = Antichain(frozenset(sg.tag0(x) for x in gen) | {sg.tag1(tracks[label])}
                                 for gen in a_obj.realizers(a))
    obj = Assembly.of(carrier, codes, alpha, "Pi")
    proj = Morphism(obj, a_obj, FiniteMap.of(obj.carrier, a_obj.carrier,
                                             fn=lambda lab: sections[lab][0]), synth_fst())
    pb = pullback(proj, f)
    ev_fn = FiniteMap.of(pb.obj.carrier, s_obj.carrier,
                         fn=lambda tb: sections[tb[0]][1][tb[1]])
    evaluation = Morphism(pb.obj, s_obj, ev_fn, _eval_tracking())
    return DependentProduct(obj, proj, evaluation, sections, tracks, tuple(excluded))


def pi_transpose(pi: DependentProduct, f: Morphism, h: Morphism, k: Morphism) -> Morphism:
    """Mediator ``X -> Pi`` for ``h: X -> A`` and ``k: X x_A B -> S`` over ``B``.

    ``k`` must be defined on the pullback of ``h`` and ``f`` (labels ``(x, b)``).
    """
    table = {}
    for x in h.source.carrier:
        a = h(x)
        t = {b: k((x, b)) for b in f.fn.fiber(a)}
        label = _section_label(a, t)
        if label not in pi.sections:
            raise ValueError(f"section {label!r} is not in the dependent product")
        table[x] = label
    return morphism(h.source, pi.obj, table)


def exponential(a: Assembly, b: Assembly, cfg: ProbeConfig = DEFAULT) -> DependentProduct:
    """``B^A`` as the dependent product of ``A x B -> A`` along ``A -> 1``."""
    prod = product(a, b)
    return pi_along(to_terminal(a), prod.fst, cfg)


# -- natural numbers ------------------------------------------------------------

DEFAULT_NMAX = 64


def nno(n_max: int = DEFAULT_NMAX) -> Assembly:
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    carrier = range(n_max + 1)
    return Assembly.of(carrier, {Num(i) for i in carrier},
                       {i: [{Num(i)}] for i in carrier}, "N")


def nno_tracking(p: Term, q: Term) -> Term:
    """``<n1..nk> |-> s(n1) * ... * s(nk)`` with ``s(0) = p <>`` and ``s(n+1) = q(s(n))``."""
    s = abstract("n", pca.app(REC, App(p, EMPTY), q, Var("n")))
    return pca.app(CMAP, s)


def nno_recursor(z: Morphism, s: Morphism, n_max: int = DEFAULT_NMAX) -> Morphism:
    """The map ``N -> A`` with ``0 |-> z(*)`` and ``n+1 |-> s(h n)``."""
    a = s.source
    if s.target.carrier != a.carrier or z.target.carrier != a.carrier:
        raise ValueError("structure maps must live on one assembly")
    if tuple(z.source.carrier) != ("*",):
        raise ValueError("the base point must come from the terminal assembly")
    n = nno(n_max)
    table = {0: z("*")}
    for i in range(1, n_max + 1):
        prev = table[i - 1]
        if prev not in s.fn.table:
            raise ValueError(f"iteration leaves the carrier at step {i}")
        table[i] = s(prev)
    return Morphism(n, a, FiniteMap.of(n.carrier, a.carrier, table),
                    nno_tracking(z.tracking, s.tracking))


def point(a: Assembly, x) -> Morphism:
    """The global element ``1 -> A`` picking ``x``."""
    one = terminal()
    return Morphism(one, a, FiniteMap.of(one.carrier, a.carrier, {"*": x}),
                    lam("m", a.generator_code(x)))


# -- nabla and gamma -------------------------------------------------------------

NABLA_CODE = Num(0)


def nabla(xs: Iterable, name: str = "") -> Assembly:
    """Indiscrete assembly: every element realized by everything containing 0."""
    xs = sort_labels(xs)
    return Assembly.of(xs, {NABLA_CODE}, {x: [{NABLA_CODE}] for x in xs}, name)


def gamma(a: Assembly) -> tuple:
    return a.carrier


def nabla_like(a: Assembly, e: Term):
    """``e`` is a code and ``<e>`` realizes every element."""
    if not sg.codes_contain(a.codes, e):
        return Fails(e, "not in the code set")
    for x in a.carrier:
        if not a.realizers(x).covers(frozenset((e,))):
            return Fails(Seq((e,)), f"does not realize {show_label(x)}", x)
    return HOLDS


def find_nabla_code(a: Assembly):
    """A code witnessing indiscreteness, or ``None`` (exhaustive over generator elements)."""
    cands = sort_terms({t for x in a.carrier for g in a.realizers(x) for t in g})
    for e in cands:
        if isinstance(nabla_like(a, e), Holds):
            return e
    return None


def nabla_map(f: FiniteMap, source: Assembly, target: Assembly) -> Morphism:
    """Any function between indiscrete assemblies, tracked by the identity."""
    return Morphism(source, target, f, I)


# -- partitioned assemblies --------------------------------------------------------


def is_partitioned(a: Assembly) -> bool:
    return all(len(a.realizers(x)) == 1 and len(a.realizers(x).members[0]) == 1
               for x in a.carrier)


def partition_code(a: Assembly, x) -> Term:
    gens = a.realizers(x)
    if len(gens) != 1 or len(gens.members[0]) != 1:
        raise ValueError(f"{show_label(x)} is not realized by a single code")
    return next(iter(gens.members[0]))


def _require_partitioned(a: Assembly):
    if not is_partitioned(a):
        raise ValueError("assembly is not partitioned")


def partitioned_product(a: Assembly, b: Assembly) -> Product:
    _require_partitioned(a)
    _require_partitioned(b)
    carrier = [(x, y) for x in a.carrier for y in b.carrier]
    codes = sg.tensor(a.codes, b.codes)
    alpha = {(x, y): [{Pair(partition_code(a, x), partition_code(b, y))}] for x, y in carrier}
    obj = Assembly.of(carrier, codes, alpha, f"({a.name or 'A'}*{b.name or 'B'})")
    c = Var("c")
    left = lam("m", pca.app(CMAP, lam("c", App(UNIT, App(FST, c))), Var("m")))
    right = lam("m", pca.app(CMAP, lam("c", App(UNIT, App(SND, c))), Var("m")))
    p1 = Morphism(obj, a, FiniteMap.of(obj.carrier, a.carrier, fn=lambda xy: xy[0]), left)
    p2 = Morphism(obj, b, FiniteMap.of(obj.carrier, b.carrier, fn=lambda xy: xy[1]), right)
    return Product(obj, p1, p2)


FLATTEN = pca.app(CMAP, I)


@dataclass(frozen=True)
class Cover:
    obj: Assembly
    proj: Morphism
    realizer: Term  # witnesses that ``proj`` is a super epi


def partitioned_cover(a: Assembly) -> Cover:
    """One point per (element, generator); each realized by the generator's code."""
    carrier, alpha = [], {}
    for x in a.carrier:
        for g in a.realizers(x):
            code = Seq(sort_terms(g))
            carrier.append((x, code))
            alpha[(x, code)] = [{code}]
    obj = Assembly.of(carrier, sg.bang(a.codes), alpha, f"cover({a.name or 'A'})")
    proj = Morphism(obj, a, FiniteMap.of(obj.carrier, a.carrier, fn=lambda xc: xc[0]), FLATTEN)
    cases = []
    for x, code in carrier:
        cases.append((frozenset(code.items), Seq((code,))))
    n = Var("n")
    body = EMPTY
    for g, w in reversed(cases):
        body = pca.app(CAT, _subset_test(g, n, w, EMPTY), body)
    return Cover(obj, proj, pca.canonical(lam("n", body)))


@dataclass(frozen=True)
class Retract:
    obj: Assembly
    to_retract: Morphism
    from_retract: Morphism


def retract_partitioned(a: Assembly, b: Assembly, f: Morphism, g: Morphism) -> Retract:
    """``A`` a retract of partitioned ``B`` (``g f = id``) is iso to ``(A, codes of B, beta f)``."""
    _require_partitioned(b)
    if f.source.carrier != a.carrier or g.target.carrier != a.carrier:
        raise ValueError("maps do not form a retraction of A")
    if any(g(f(x)) != x for x in a.carrier):
        raise ValueError("g after f is not the identity")
    obj = Assembly.of(a.carrier, b.codes, {x: b.realizers(f(x)) for x in a.carrier},
                      f"retract({a.name or 'A'})")
    ident = FiniteMap.of(a.carrier, a.carrier, fn=lambda x: x)
    return Retract(obj, Morphism(a, obj, ident, f.tracking), Morphism(obj, a, ident, g.tracking))


def section_of_cover(p: Morphism, r: Term, cfg: ProbeConfig = DEFAULT) -> Morphism:
    """Section of a super epi onto a partitioned assembly, tracked by ``<m..> |-> r<m1> * ..``."""
    tgt, src = p.target, p.source
    _require_partitioned(tgt)
    table = {}
    for a in tgt.carrier:
        code = Seq((partition_code(tgt, a),))
        res = pca.apply(r, code, cfg.fuel)
        if not isinstance(res, pca.Value):
            raise ValueError(f"realizer gives no value on {show(code)}")
        for b in p.fn.fiber(a):
            if isinstance(sg.actual_member(src.atom(b), res.term, cfg), Holds):
                table[a] = b
                break
        else:
            raise ValueError(f"realizer picks no preimage of {show_label(a)}")
    s = pca.app(CMAP, abstract("c", App(r, App(UNIT, Var("c")))))
    return Morphism(tgt, src, FiniteMap.of(tgt.carrier, src.carrier, table), s)


# -- isomorphisms and the preservation suite ---------------------------------------


def is_iso(f: Morphism, g: Morphism, cfg: ProbeConfig = DEFAULT) -> bool:
    """``f`` and ``g`` are mutually inverse tracked maps."""
    if any(g(f(x)) != x for x in f.source.carrier):
        return False
    if any(f(g(y)) != y for y in g.source.carrier):
        return False
    return is_tracked(f, cfg) and is_tracked(g, cfg)


def iso_by_table(a: Assembly, b: Assembly, table: Mapping, cfg: ProbeConfig = DEFAULT) -> bool:
    """Is the bijection ``table`` an isomorphism (with synthesized trackings both ways)?"""
    if set(table) != set(a.carrier) or sorted(map(label_key, table.values())) != sorted(
            map(label_key, b.carrier)):
        return False
    inverse = {v: k for k, v in table.items()}
    return is_iso(morphism(a, b, table), morphism(b, a, inverse), cfg)


@dataclass(frozen=True)
class CaseResult:
    name: str
    ok: bool
    detail: str = ""


def _sample_pair(xs, ys):
    """Two parallel functions ``X -> Y`` used for equalizer and coequalizer cases."""
    xs, ys = sort_labels(xs), sort_labels(ys)
    if xs and not ys:
        return None
    f = FiniteMap.of(xs, ys, {x: ys[0] for x in xs})
    g = FiniteMap.of(xs, ys, {x: ys[i % len(ys)] for i, x in enumerate(xs)})
    return f, g


def pretopos_preservation_suite(xs: Iterable, ys: Iterable,
                                cfg: ProbeConfig = DEFAULT) -> list[CaseResult]:
    """Compare nabla of set constructions with the constructions on nabla images."""
    xs, ys = sort_labels(xs), sort_labels(ys)
    nx, ny = nabla(xs, "X"), nabla(ys, "Y")
    out = []

    def case(name, a, b, table):
        ok = iso_by_table(a, b, table, cfg)
        out.append(CaseResult(name, ok, "" if ok else f"{a.name} vs {b.name}"))

    prod = product(nx, ny).obj
    pairs = [(x, y) for x in xs for y in ys]
    case("product", nabla(pairs), prod, {p: p for p in pairs})
    tags = [(0, x) for x in xs] + [(1, y) for y in ys]
    case("sum", nabla(tags), sum_(nx, ny).obj, {t: t for t in tags})
    case("initial", nabla(()), initial(), {})
    case("terminal", nabla(("*",)), terminal(), {"*": "*"})
    pair = _sample_pair(xs, ys)
    if pair is None:
        out.append(CaseResult("equalizer", True, "no maps X -> Y"))
        out.append(CaseResult("coequalizer", True, "no maps X -> Y"))
    else:
        f, g = pair
        fm, gm = nabla_map(f, nx, ny), nabla_map(g, nx, ny)
        eq_set = [x for x in xs if f(x) == g(x)]
        case("equalizer", nabla(eq_set), equalizer(fm, gm).obj, {x: x for x in eq_set})
        rep = set_quotient(ys, ((f(x), g(x)) for x in xs))
        classes = sort_labels(rep.values())
        case("coequalizer", nabla(classes), coequalizer(fm, gm).obj, {c: c for c in classes})
    maps = list(_functions(xs, ys))
    expo = exponential(nx, ny, cfg)
    table = {}
    for h in maps:
        t = {x: (x, h[x]) for x in xs}
        table[tuple(h[x] for x in xs)] = _section_label("*", t)
    ok_all = not expo.excluded
    fset = nabla(table)
    if ok_all and set(table.values()) == set(expo.obj.carrier):
        case("function set", fset, expo.obj, table)
    else:
        out.append(CaseResult("function set", False, "sections missing from the exponential"))
    # reflection: nabla is full, so every function between the sets is tracked
    full = all(is_tracked(nabla_map(FiniteMap.of(xs, ys, h), nx, ny), cfg) for h in maps)
    out.append(CaseResult("full on maps", full))
    return out


def _functions(xs, ys):
    for values in cartesian(ys, repeat=len(xs)):
        yield dict(zip(xs, values))


# -- textual format ------------------------------------------------------------


def assembly_from_sexpr(form) -> Assembly:
    if head(form) != "assembly" or len(form) < 2:
        raise ParseError("expected (assembly NAME (carrier ...) (realizers ...) (alpha ...))",
                         position(form))
    name = str(form[1])
    carrier = codes = alpha = None
    for item in form[2:]:
        h = head(item)
        if h == "carrier":
            carrier = [label_from_sexpr(x) for x in item[1:]]
        elif h == "realizers":
            codes = sg.a1_from_items(item[1:])
        elif h == "alpha":
            alpha = {}
            for entry in item[1:]:
                if not isinstance(entry, list) or not entry:
                    raise ParseError(f"bad alpha entry {dump(entry)}", position(entry))
                sets = []
                for s in entry[1:]:
                    if head(s) != "set":
                        raise ParseError("expected (set t ...)", position(s))
                    sets.append(frozenset(pca.canonical(pca.from_sexpr(t)) for t in s[1:]))
                alpha[label_from_sexpr(entry[0])] = sets
        else:
            raise ParseError(f"unknown assembly field {dump(item)}", position(item))
    if carrier is None or codes is None or alpha is None:
        raise ParseError("assembly needs carrier, realizers and alpha", position(form))
    try:
        return Assembly.of(carrier, codes, alpha, name)
    except ValueError as e:
        raise ParseError(str(e), position(form)) from None


def morphism_from_sexpr(form, assemblies: Mapping[str, Assembly]) -> Morphism:
    if head(form) != "morphism" or len(form) < 2:
        raise ParseError("expected (morphism NAME (source A) (target B) (map ...) (tracking T))",
                         position(form))
    name = str(form[1])
    fields = {}
    for item in form[2:]:
        h = head(item)
        if h not in ("source", "target", "map", "tracking"):
            raise ParseError(f"unknown morphism field {dump(item)}", position(item))
        fields[h] = item
    for key in ("source", "target", "map"):
        if key not in fields:
            raise ParseError(f"morphism {name} lacks ({key} ...)", position(form))
    try:
        src = assemblies[str(fields["source"][1])]
        tgt = assemblies[str(fields["target"][1])]
    except (KeyError, IndexError):
        raise ParseError(f"morphism {name} refers to an unknown assembly", position(form)) from None
    table = {}
    for pair in fields["map"][1:]:
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"bad map entry {dump(pair)}", position(pair))
        table[label_from_sexpr(pair[0])] = label_from_sexpr(pair[1])
    tracking = None
    if "tracking" in fields:
        if len(fields["tracking"]) != 2:
            raise ParseError("expected (tracking TERM)", position(fields["tracking"]))
        tracking = pca.from_sexpr(fields["tracking"][1])
    try:
        return morphism(src, tgt, table, tracking, name)
    except ValueError as e:
        raise ParseError(str(e), position(form)) from None


def load_document(text: str) -> tuple[dict, dict]:
    """Read assemblies and morphisms (in order) from one text."""
    assemblies: dict = {}
    morphisms: dict = {}
    for form in read_all(text):
        h = head(form)
        if h == "assembly":
            a = assembly_from_sexpr(form)
            assemblies[a.name] = a
        elif h == "morphism":
            m = morphism_from_sexpr(form, assemblies)
            morphisms[m.name] = m
        else:
            raise ParseError(f"expected assembly or morphism, got {dump(form)}", position(form))
    return assemblies, morphisms


__all__ = [
    "Assembly", "CaseResult", "Coequalizer", "Cover", "DEFAULT_NMAX", "DependentProduct",
    "Equalizer", "FLATTEN", "Factorization", "Morphism", "NABLA_CODE", "Product", "Pullback",
    "Retract", "Sum", "assembly_from_sexpr", "check_tracking", "tracking_report", "compose", "coequalizer",
    "equalizer", "eval_realizer", "exponential", "factorize", "find_nabla_code", "from_initial",
    "gamma", "identity", "initial", "is_iso", "is_mono", "is_partitioned", "is_super_epi",
    "is_tracked", "iso_by_table", "load_document", "morphism", "morphism_from_sexpr", "nabla",
    "nabla_like", "nabla_map", "nno", "nno_recursor", "nno_tracking", "partition_code",
    "partitioned_cover", "partitioned_product", "pi_along", "pi_transpose", "point", "product",
    "pretopos_preservation_suite", "pullback", "retract_partitioned", "section_of_cover",
    "set_quotient", "sum_", "synth_cover_realizer", "synth_tracking", "terminal", "to_terminal",
]
