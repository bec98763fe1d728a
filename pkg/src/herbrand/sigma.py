"""Herbrand truth values: pairs (A0, A1) with A0 an upward closed part of !A1.

A finite ``A0`` is stored as the antichain of its minimal supports; a code
``m`` in ``!A1`` is an actual realizer when its set of components contains
one of those supports.  Implication, negation and the universal quantifier
are kept symbolic and checked against finite probe sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from typing import Iterable

from . import pca
from .pca import (CAT, CMAP, EMPTY, FST, MKPAIR, NCASE, SND, UNIT, App, K, Num, Pair,
                  Seq, Term, Var, app, lam, show, sort_terms, term_key)
from .sexpr import ParseError, dump, head, position, read_one

# -- code sets (the A1 components) -----------------------------------------


class _All:
    """The whole pca."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ALL"

    def __reduce__(self):
        return (_All, ())


ALL = _All()


@dataclass(frozen=True)
class Tagged:
    """``left & right``: codes ``p 0 a`` with ``a`` in left, ``p 1 b`` with ``b`` in right."""

    left: object
    right: object


@dataclass(frozen=True)
class Tensor:
    """``left (x) right``: pairs ``p a b``."""

    left: object
    right: object


@dataclass(frozen=True)
class Bang:
    """``!base``: sequence codes over ``base``."""

    base: object


def is_finite(codes) -> bool:
    return isinstance(codes, frozenset)


def tag0(a: Term) -> Pair:
    return Pair(Num(0), a)


def tag1(b: Term) -> Pair:
    return Pair(Num(1), b)


def tagged(a, b):
    if is_finite(a) and is_finite(b):
        return frozenset(tag0(x) for x in a) | frozenset(tag1(y) for y in b)
    return Tagged(a, b)


def tensor(a, b):
    if is_finite(a) and is_finite(b):
        return frozenset(Pair(x, y) for x in a for y in b)
    return Tensor(a, b)


def bang(a):
    return Bang(a)


def codes_contain(codes, c: Term) -> bool:
    if codes is ALL:
        return True
    if isinstance(codes, frozenset):
        return c in codes
    if isinstance(codes, Tagged):
        if type(c) is not Pair or type(c.left) is not Num or c.left.n > 1:
            return False
        return codes_contain(codes.left if c.left.n == 0 else codes.right, c.right)
    if isinstance(codes, Tensor):
        return (type(c) is Pair and codes_contain(codes.left, c.left)
                and codes_contain(codes.right, c.right))
    if isinstance(codes, Bang):
        return type(c) is Seq and all(codes_contain(codes.base, x) for x in c.items)
    raise TypeError(codes)


def codes_sample(codes, limit: int = 6) -> list[Term]:
    """A few members of a code set, for probing infinite ones."""
    if codes is ALL:
        return [Num(0), K]
    if isinstance(codes, frozenset):
        return sort_terms(codes)
    if isinstance(codes, Tagged):
        out = [tag0(x) for x in codes_sample(codes.left, limit)]
        out += [tag1(y) for y in codes_sample(codes.right, limit)]
        return out[:limit]
    if isinstance(codes, Tensor):
        return [Pair(x, y) for x in codes_sample(codes.left, limit)
                for y in codes_sample(codes.right, limit)][:limit]
    if isinstance(codes, Bang):
        return [EMPTY] + [Seq((x,)) for x in codes_sample(codes.base, limit)][: limit - 1]
    raise TypeError(codes)


def codes_to_sexpr(codes) -> str:
    if codes is ALL:
        return "all"
    if isinstance(codes, frozenset):
        return "(codes" + "".join(" " + show(t) for t in sort_terms(codes)) + ")"
    if isinstance(codes, Tagged):
        return f"(tagged {codes_to_sexpr(codes.left)} {codes_to_sexpr(codes.right)})"
    if isinstance(codes, Tensor):
        return f"(tensor {codes_to_sexpr(codes.left)} {codes_to_sexpr(codes.right)})"
    if isinstance(codes, Bang):
        return f"(bang {codes_to_sexpr(codes.base)})"
    raise TypeError(codes)


_CODESET_HEADS = {"codes", "tagged", "tensor", "bang"}


def codes_from_sexpr(form):
    if form == "all":
        return ALL
    h = head(form)
    if h == "codes":
        return frozenset(pca.canonical(pca.from_sexpr(f)) for f in form[1:])
    if h in ("tagged", "tensor") and len(form) == 3:
        build = tagged if h == "tagged" else tensor
        return build(codes_from_sexpr(form[1]), codes_from_sexpr(form[2]))
    if h == "bang" and len(form) == 2:
        return Bang(codes_from_sexpr(form[1]))
    raise ParseError(f"malformed code set {dump(form)}", position(form))


# -- antichains ------------------------------------------------------------


def _set_key(s: frozenset):
    return (len(s), tuple(term_key(t) for t in sort_terms(s)))


class Antichain:
    """Minimal supports of an upward closed family of sequence codes."""

    __slots__ = ("members", "_hash")

    def __init__(self, sets: Iterable[Iterable[Term]] = ()):
        fams = {frozenset(s) for s in sets}
        minimal = [s for s in fams if not any(o < s for o in fams)]
        self.members = tuple(sorted(minimal, key=_set_key))
        self._hash = hash(self.members)

    def __eq__(self, other):
        return isinstance(other, Antichain) and self.members == other.members

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __bool__(self):
        return bool(self.members)

    def __repr__(self):
        return "Antichain(" + ", ".join(
            "{" + ", ".join(show(t) for t in sort_terms(s)) + "}" for s in self.members) + ")"

    def covers(self, supp: frozenset) -> bool:
        return any(g <= supp for g in self.members)

    def union(self, other: "Antichain") -> "Antichain":
        return Antichain(self.members + other.members)

    def elements(self) -> frozenset:
        out = frozenset()
        for g in self.members:
            out |= g
        return out

    def to_sexpr(self) -> str:
        return "(gens" + "".join(
            " (set" + "".join(" " + show(t) for t in sort_terms(g)) + ")"
            for g in self.members) + ")"


def antichain_from_sexpr(form) -> Antichain:
    if head(form) != "gens":
        raise ParseError("expected (gens (set ...) ...)", position(form))
    sets = []
    for s in form[1:]:
        if head(s) != "set":
            raise ParseError("expected (set t ...)", position(s))
        sets.append(pca.canonical(pca.from_sexpr(t)) for t in s[1:])
    return Antichain(sets)


# -- truth values ----------------------------------------------------------


class TruthValue:
    __slots__ = ()

    def __str__(self):
        return tv_to_sexpr(self)


@dataclass(frozen=True)
class Atom(TruthValue):
    a1: object
    gens: Antichain

    def __repr__(self):
        return tv_to_sexpr(self)


@dataclass(frozen=True)
class And(TruthValue):
    left: TruthValue
    right: TruthValue


@dataclass(frozen=True)
class Or(TruthValue):
    left: TruthValue
    right: TruthValue


@dataclass(frozen=True)
class Imp(TruthValue):
    left: TruthValue
    right: TruthValue


@dataclass(frozen=True)
class Not(TruthValue):
    body: TruthValue


@dataclass(frozen=True)
class Forall(TruthValue):
    """Universal quantification over a fibre; ``parts`` are the fibre's values."""

    parts: tuple


TOP = Atom(ALL, Antichain([frozenset()]))
BOTTOM = Atom(frozenset(), Antichain([]))


def mk_atom(gens: Iterable[Iterable[Term]], a1=ALL) -> Atom:
    gens = [frozenset(g) for g in gens]
    if a1 is not ALL and not isinstance(a1, (Tagged, Tensor, Bang)):
        a1 = frozenset(a1)
    for g in gens:
        for t in g:
            if not codes_contain(a1, t):
                raise ValueError(f"generator element {show(t)} is outside A1")
    return Atom(a1, Antichain(gens))


def conj(a: TruthValue, b: TruthValue) -> TruthValue:
    if isinstance(a, Atom) and isinstance(b, Atom) and is_finite(a.a1) and is_finite(b.a1):
        gens = [frozenset(tag0(x) for x in g) | frozenset(tag1(y) for y in h)
                for g in a.gens for h in b.gens]
        return Atom(tagged(a.a1, b.a1), Antichain(gens))
    return And(a, b)


def disj(a: TruthValue, b: TruthValue) -> TruthValue:
    if isinstance(a, Atom) and isinstance(b, Atom) and is_finite(a.a1) and is_finite(b.a1):
        gens = [frozenset(tag0(x) for x in g) for g in a.gens]
        gens += [frozenset(tag1(y) for y in h) for h in b.gens]
        return Atom(tagged(a.a1, b.a1), Antichain(gens))
    return Or(a, b)


def imp(a: TruthValue, b: TruthValue) -> TruthValue:
    if b == BOTTOM:
        return Not(a)
    return Imp(a, b)


def neg(a: TruthValue) -> TruthValue:
    return Not(a)


def imp_rank(t: TruthValue) -> int:
    return _imp_rank(t)


@lru_cache(maxsize=50_000)
def _imp_rank(t):
    if isinstance(t, Atom):
        return 0
    if isinstance(t, (And, Or)):
        return max(_imp_rank(t.left), _imp_rank(t.right))
    if isinstance(t, Imp):
        return 1 + max(_imp_rank(t.left), _imp_rank(t.right))
    if isinstance(t, Not):
        return 1 + _imp_rank(t.body)
    if isinstance(t, Forall):
        return 1 + max((_imp_rank(p) for p in t.parts), default=0)
    raise TypeError(t)


# -- verification outcomes -------------------------------------------------


@dataclass(frozen=True)
class Holds:
    def __str__(self):
        return "holds"


@dataclass(frozen=True)
class Fails:
    witness: Term
    reason: str = ""
    index: object = None

    def __str__(self):
        where = f" at {self.index!r}" if self.index is not None else ""
        return f"fails{where}: {show(self.witness)} ({self.reason})"


@dataclass(frozen=True)
class Unknown:
    reason: str  # "fuel" or "probe-limit"
    passed: bool = False  # every available probe passed

    def __str__(self):
        extra = ", all probes passed" if self.passed else ""
        return f"unknown ({self.reason}{extra})"


HOLDS = Holds()
Ternary = Holds | Fails | Unknown


def passes(r) -> bool:
    """Holds outright, or holds on every probe tried."""
    return isinstance(r, Holds) or (isinstance(r, Unknown) and r.passed)


def _rank(r):
    if isinstance(r, Fails):
        return 0
    if isinstance(r, Unknown):
        if r.reason == "fuel":
            return 1
        return 3 if r.passed else 2
    return 4


def conjoin(results: Iterable) -> Ternary:
    """All must hold; a failure is definitive, otherwise the weakest unknown."""
    worst = HOLDS
    for r in results:
        if isinstance(r, Fails):
            return r
        if _rank(r) < _rank(worst):
            worst = r
    return worst


def disjoin(results: Iterable, witness: Term = EMPTY, reason: str = "no case holds") -> Ternary:
    best = None
    for r in results:
        if isinstance(r, Holds):
            return r
        if best is None or _rank(r) > _rank(best):
            best = r
    if best is None:
        return Fails(witness, reason)
    return best


# -- probing configuration -------------------------------------------------


@dataclass(frozen=True)
class ProbeConfig:
    fuel: int = pca.DEFAULT_FUEL
    probe_len: int = 2
    max_probes: int = 128
    imp_depth: int = 3
    dummies: tuple = field(default=(Num(0), K, EMPTY))

    def __post_init__(self):
        if self.fuel <= 0 or self.probe_len < 0 or self.max_probes <= 0 or self.imp_depth < 0:
            raise ValueError("probe configuration values must be positive")


DEFAULT = ProbeConfig()


class ProbeLimit(Exception):
    """Probing would need to quantify over codes nested too deeply."""


class Undecidable(ValueError):
    pass


# -- exponential isomorphism ------------------------------------------------


def iso_split(m: Term):
    """Meta-level ``!(A & B) -> !A (x) !B``; ``None`` if ``m`` is not tagged."""
    if type(m) is Pair:
        return m.left, m.right
    if type(m) is not Seq:
        return None
    xs, ys = [], []
    for c in m.items:
        if type(c) is not Pair or type(c.left) is not Num or c.left.n > 1:
            return None
        (xs if c.left.n == 0 else ys).append(c.right)
    return Seq(xs), Seq(ys)


def iso_join(x: Seq, y: Seq) -> Seq:
    return Seq([tag0(a) for a in x.items] + [tag1(b) for b in y.items])


def _build_iso():
    m, e, q, a, b = Var("m"), Var("e"), Var("q"), Var("a"), Var("b")
    left = lam("e", app(NCASE, app(FST, e), app(UNIT, app(SND, e)), app(K, EMPTY)))
    right = lam("e", app(NCASE, app(FST, e), EMPTY, app(K, app(UNIT, app(SND, e)))))
    iso = lam("m", app(MKPAIR, app(CMAP, left, m), app(CMAP, right, m)))
    inv = lam("q", app(CAT,
                       app(CMAP, lam("a", app(UNIT, Pair(Num(0), a))), app(FST, q)),
                       app(CMAP, lam("b", app(UNIT, Pair(Num(1), b))), app(SND, q))))
    return pca.canonical(iso), pca.canonical(inv)


ISO, ISO_INV = _build_iso()


def exp_iso() -> tuple[Term, Term]:
    """Closed terms for ``!(A & B) -> !A (x) !B`` and its inverse."""
    return ISO, ISO_INV


# -- probes -----------------------------------------------------------------


def _sequences(elements: list, max_len: int) -> list[Seq]:
    out = []
    for k in range(1, max_len + 1):
        out.extend(Seq(p) for p in permutations(elements, k))
    return out


def _cap(items: Iterable, limit: int) -> tuple:
    seen = []
    got = set()
    for it in items:
        if it not in got:
            got.add(it)
            seen.append(it)
            if len(seen) >= limit:
                break
    return tuple(seen)


def code_probes(codes, gens: Iterable[frozenset], cfg: ProbeConfig) -> tuple:
    """Probe codes over ``codes``: <>, short distinct sequences, one per generator."""
    gens = list(gens)
    elems = codes_sample(codes) if not is_finite(codes) else sort_terms(codes)
    extra = sort_terms({t for g in gens for t in g} - set(elems))
    elems = elems + extra
    first = [EMPTY] + [Seq((x,)) for x in elems]
    first += [Seq(sort_terms(g)) for g in gens]
    rest = _sequences(elems, cfg.probe_len) if cfg.probe_len >= 2 else []
    return _cap(first + rest, cfg.max_probes)


def probes(t: TruthValue, cfg: ProbeConfig = DEFAULT) -> tuple:
    """Finite list of potential realizers of ``t`` used in place of ``!t1``."""
    if imp_rank(t) > cfg.imp_depth:
        raise ProbeLimit(f"implication nesting {imp_rank(t)} exceeds {cfg.imp_depth}")
    return _probes(t, cfg)


@lru_cache(maxsize=20_000)
def _probes(t, cfg):
    if isinstance(t, Atom):
        return code_probes(t.a1, t.gens, cfg)
    if isinstance(t, (And, Or)):
        return _cap((iso_join(x, y) for x in _probes(t.left, cfg)
                     for y in _probes(t.right, cfg)), cfg.max_probes)
    if isinstance(t, (Imp, Not)):
        target = t.right if isinstance(t, Imp) else BOTTOM
        cands = [App(K, v) for v in _probes(target, cfg)]
        return _function_probes(cands, cfg)
    if isinstance(t, Forall):
        if not t.parts:
            cands = [App(K, d) for d in cfg.dummies]
        else:
            cands = [App(K, v) for v in _probes(t.parts[0], cfg)
                     if all(passes(potential_member(p, v, cfg)) for p in t.parts[1:])]
        return _function_probes(cands, cfg)
    raise TypeError(t)


def _function_probes(cands, cfg):
    cands = [pca.canonical(c) for c in cands]
    seqs = [EMPTY] + [Seq((c,)) for c in cands]
    if cfg.probe_len >= 2:
        seqs += [Seq((a, b)) for a, b in permutations(cands[:4], 2)]
    return _cap(seqs, cfg.max_probes)


# -- membership ------------------------------------------------------------


def potential_member(t: TruthValue, m: Term, cfg: ProbeConfig = DEFAULT) -> Ternary:
    """Is ``m`` a potential realizer of ``t`` (an element of ``!t1``)?"""
    return _potential(t, m, cfg)


def actual_member(t: TruthValue, m: Term, cfg: ProbeConfig = DEFAULT) -> Ternary:
    """Is ``m`` an actual realizer of ``t`` (an element of ``t0``)?"""
    return _actual(t, m, cfg)


@lru_cache(maxsize=500_000)
def _potential(t, m, cfg):
    if isinstance(t, Atom):
        if type(m) is not Seq:
            return Fails(m, "not a sequence code")
        for c in m.items:
            if not codes_contain(t.a1, c):
                return Fails(m, f"component {show(c)} outside A1")
        return HOLDS
    if isinstance(t, (And, Or)):
        parts = iso_split(m)
        if parts is None:
            return Fails(m, "not a code over a tagged union")
        return conjoin((_potential(t.left, parts[0], cfg), _potential(t.right, parts[1], cfg)))
    if type(m) is not Seq:
        return Fails(m, "not a sequence code")
    if isinstance(t, (Imp, Not)):
        left = t.left if isinstance(t, Imp) else t.body
        right = t.right if isinstance(t, Imp) else BOTTOM
        return conjoin(_in_function_space(left, right, c, cfg) for c in m.items)
    if isinstance(t, Forall):
        return conjoin(_in_forall_space(t.parts, a, cfg) for a in m.items)
    raise TypeError(t)


def _in_function_space(left, right, c, cfg):
    """``c . n`` defined and potential for ``right`` whenever ``n`` is potential for ``left``."""
    v = pca.constant_value(c)
    if v is not None:
        return _potential(right, v, cfg)
    try:
        ps = probes(left, cfg)
    except ProbeLimit:
        return Unknown("probe-limit")
    results = []
    for p in ps:
        res = pca.apply(c, p, cfg.fuel)
        if isinstance(res, pca.Diverged):
            results.append(Unknown("fuel"))
            continue
        if isinstance(res, pca.Stuck):
            return Fails(p, f"{show(c)} undefined here: {res.reason}")
        r = _potential(right, res.term, cfg)
        if isinstance(r, Fails):
            return Fails(p, f"{show(c)} maps it to non-potential {show(res.term)}")
        results.append(r)
    return conjoin(results + [Unknown("probe-limit", passed=True)])


def _in_forall_space(parts, a, cfg):
    if not parts:
        return HOLDS
    v = pca.constant_value(a)
    if v is not None:
        return conjoin(_potential(p, v, cfg) for p in parts)
    results = []
    for b in cfg.dummies:
        res = pca.apply(a, b, cfg.fuel)
        if isinstance(res, pca.Diverged):
            results.append(Unknown("fuel"))
            continue
        if isinstance(res, pca.Stuck):
            return Fails(b, f"{show(a)} undefined here: {res.reason}")
        for p in parts:
            r = _potential(p, res.term, cfg)
            if isinstance(r, Fails):
                return Fails(b, f"{show(a)} maps it to non-potential {show(res.term)}")
            results.append(r)
    return conjoin(results + [Unknown("probe-limit", passed=True)])


@lru_cache(maxsize=500_000)
def _actual(t, m, cfg):
    pot = _potential(t, m, cfg)
    if isinstance(pot, Fails):
        return pot
    if isinstance(t, Atom):
        if t.gens.covers(frozenset(m.items)):
            return HOLDS
        return Fails(m, "support contains no generator")
    if isinstance(t, (And, Or)):
        x, y = iso_split(m)
        if isinstance(t, And):
            return conjoin((_actual(t.left, x, cfg), _actual(t.right, y, cfg)))
        return conjoin((pot, disjoin((_actual(t.left, x, cfg), _actual(t.right, y, cfg)),
                                     m, "neither side actual")))
    if isinstance(t, Not):
        try:
            inh = inhabited(t.body, cfg)
        except Undecidable:
            inh = None
        if inh is True:
            return Fails(m, "negated value is inhabited, so the negation has no actual realizers")
        if inh is False:
            if not m.items:
                return Fails(m, "the empty code is excluded")
            return pot
        return conjoin((pot, disjoin((_imp_component(t.body, BOTTOM, c, cfg) for c in m.items),
                                     m, "no component realizes the implication")))
    if isinstance(t, Imp):
        return conjoin((pot, disjoin((_imp_component(t.left, t.right, c, cfg) for c in m.items),
                                     m, "no component realizes the implication")))
    if isinstance(t, Forall):
        return conjoin((pot, disjoin((_forall_component(t.parts, a, cfg) for a in m.items),
                                     m, "no component realizes the universal")))
    raise TypeError(t)


def _imp_component(left, right, c, cfg):
    """``c . n`` actual for ``right`` whenever ``n`` is actual for ``left``."""
    v = pca.constant_value(c)
    if v is not None:
        try:
            inh = inhabited(left, cfg)
        except Undecidable:
            inh = None
        if inh is False:
            return HOLDS
        if inh is True:
            return _actual(right, v, cfg)
    try:
        ps = probes(left, cfg)
    except ProbeLimit:
        return Unknown("probe-limit")
    results = []
    for p in ps:
        src = _actual(left, p, cfg)
        if isinstance(src, Fails):
            continue
        res = pca.apply(c, p, cfg.fuel)
        if isinstance(res, pca.Diverged):
            results.append(Unknown("fuel"))
            continue
        if isinstance(res, pca.Stuck):
            return Fails(p, f"{show(c)} undefined on an actual realizer")
        r = _actual(right, res.term, cfg)
        if isinstance(r, Fails):
            if passes(src):
                return Fails(p, f"{show(c)} maps an actual realizer to {show(res.term)}")
            r = Unknown("probe-limit")
        results.append(r)
    return conjoin(results + [Unknown("probe-limit", passed=True)])


def _forall_component(parts, a, cfg):
    if not parts:
        return HOLDS
    v = pca.constant_value(a)
    if v is not None:
        return conjoin(_actual(p, v, cfg) for p in parts)
    results = []
    for b in cfg.dummies:
        res = pca.apply(a, b, cfg.fuel)
        if isinstance(res, pca.Diverged):
            results.append(Unknown("fuel"))
            continue
        if isinstance(res, pca.Stuck):
            return Fails(b, "undefined")
        for p in parts:
            r = _actual(p, res.term, cfg)
            if isinstance(r, Fails):
                return Fails(b, f"{show(a)} gives non-actual {show(res.term)}")
            results.append(r)
    return conjoin(results + [Unknown("probe-limit", passed=True)])


# -- inhabitation ------------------------------------------------------------


def inhabited(t: TruthValue, cfg: ProbeConfig = DEFAULT) -> bool:
    """Whether ``t0`` is inhabited; raises :class:`Undecidable` past the nesting budget."""
    if imp_rank(t) > cfg.imp_depth:
        raise Undecidable(f"implication nesting {imp_rank(t)} exceeds {cfg.imp_depth}")
    return _inhabited(t)


@lru_cache(maxsize=50_000)
def _inhabited(t):
    if isinstance(t, Atom):
        return bool(t.gens)
    if isinstance(t, And):
        return _inhabited(t.left) and _inhabited(t.right)
    if isinstance(t, Or):
        return _inhabited(t.left) or _inhabited(t.right)
    if isinstance(t, Imp):
        return (not _inhabited(t.left)) or _inhabited(t.right)
    if isinstance(t, Not):
        return not _inhabited(t.body)
    if isinstance(t, Forall):
        return _common_actual(t.parts) is not None
    raise TypeError(t)


def _common_actual(parts):
    """A single code actual for every part (atoms only)."""
    if not parts:
        return EMPTY
    if not all(isinstance(p, Atom) for p in parts):
        raise Undecidable("universal over non-atomic values")
    for choice in product(*(p.gens.members for p in parts)):
        u = frozenset().union(*choice)
        if all(all(codes_contain(p.a1, x) for x in u) for p in parts):
            return Seq(sort_terms(u))
    return None


def witness(t: TruthValue, cfg: ProbeConfig = DEFAULT) -> Term:
    """A canonical actual realizer of an inhabited value."""
    if not inhabited(t, cfg):
        raise ValueError("value has no actual realizers")
    return _witness(t)


def _witness(t):
    if isinstance(t, Atom):
        return Seq(sort_terms(t.gens.members[0]))
    if isinstance(t, And):
        return iso_join(_witness(t.left), _witness(t.right))
    if isinstance(t, Or):
        if _inhabited(t.left):
            return iso_join(_witness(t.left), EMPTY)
        return iso_join(EMPTY, _witness(t.right))
    if isinstance(t, Imp):
        if not _inhabited(t.left):
            return Seq((App(K, EMPTY),))
        return Seq((App(K, _witness(t.right)),))
    if isinstance(t, Not):
        return Seq((App(K, EMPTY),))
    if isinstance(t, Forall):
        return Seq((App(K, _common_actual(t.parts)),))
    raise TypeError(t)


NN_WITNESS = Seq((App(K, EMPTY),))


def nn_actual_inhabited(a: TruthValue, cfg: ProbeConfig = DEFAULT) -> bool:
    """Inhabitation of the double negation, decided by the two-case description of negation."""
    return inhabited(Not(Not(a)), cfg)


# -- textual format ---------------------------------------------------------


def tv_to_sexpr(t: TruthValue) -> str:
    if t == TOP:
        return "(top)"
    if t == BOTTOM:
        return "(bot)"
    if isinstance(t, Atom):
        items = a1_to_items(t.a1)
        a1 = f"(a1 {items})" if items else "(a1)"
        return f"(atom {a1} {t.gens.to_sexpr()})"
    if isinstance(t, And):
        return f"(and {tv_to_sexpr(t.left)} {tv_to_sexpr(t.right)})"
    if isinstance(t, Or):
        return f"(or {tv_to_sexpr(t.left)} {tv_to_sexpr(t.right)})"
    if isinstance(t, Imp):
        return f"(imp {tv_to_sexpr(t.left)} {tv_to_sexpr(t.right)})"
    if isinstance(t, Not):
        return f"(not {tv_to_sexpr(t.body)})"
    if isinstance(t, Forall):
        return "(forall" + "".join(" " + tv_to_sexpr(p) for p in t.parts) + ")"
    raise TypeError(t)


def a1_from_items(rest):
    """``all``, a single code-set form, or a plain list of terms."""
    if len(rest) == 1 and rest[0] == "all":
        return ALL
    if len(rest) == 1 and head(rest[0]) in _CODESET_HEADS:
        return codes_from_sexpr(rest[0])
    return frozenset(pca.canonical(pca.from_sexpr(x)) for x in rest)


def a1_to_items(a1) -> str:
    if a1 is ALL:
        return "all"
    if is_finite(a1):
        return " ".join(show(x) for x in sort_terms(a1))
    return codes_to_sexpr(a1)


def tv_from_sexpr(form) -> TruthValue:
    h = head(form)
    args = form[1:] if isinstance(form, list) else []
    if h == "top" and not args:
        return TOP
    if h == "bot" and not args:
        return BOTTOM
    if h == "atom" and len(args) == 2:
        a1f, gensf = args
        if head(a1f) != "a1":
            raise ParseError("expected (a1 ...)", position(a1f))
        a1 = a1_from_items(a1f[1:])
        gens = antichain_from_sexpr(gensf)
        try:
            return mk_atom(gens.members, a1)
        except ValueError as e:
            raise ParseError(str(e), position(form)) from None
    if h in ("and", "or", "imp") and len(args) == 2:
        l, r = tv_from_sexpr(args[0]), tv_from_sexpr(args[1])
        return {"and": And, "or": Or, "imp": imp}[h](l, r)
    if h == "not" and len(args) == 1:
        return Not(tv_from_sexpr(args[0]))
    if h == "forall":
        return Forall(tuple(tv_from_sexpr(a) for a in args))
    raise ParseError(f"malformed truth value {dump(form)}", position(form))


def parse_tv(text: str) -> TruthValue:
    return tv_from_sexpr(read_one(text))
