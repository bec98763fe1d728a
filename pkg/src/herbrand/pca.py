"""A closed combinatory term model used as the partial combinatory algebra.

Terms are built from ``S``, ``K``, numerals, pairs, sequence codes,
application and a handful of primitive operations.  Evaluation is normal
order with a step budget (fuel); running out of fuel models divergence and a
primitive meeting an argument outside its domain is reported as stuck.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import lru_cache
from itertools import chain
from typing import Iterable, Sequence

from .sexpr import ParseError, dump, position, read_one

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

DEFAULT_FUEL = 10_000


class Term:
    __slots__ = ("_hash",)

    def __repr__(self):
        return show(self)

    def __str__(self):
        return show(self)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return term_key(self) < term_key(other)

    def __call__(self, *args):
        return app(self, *args)


class Comb(Term):
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name
        self._hash = hash(("comb", name))

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (type(other) is Comb and other.name == self.name)


class Prim(Term):
    __slots__ = ("name",)

    def __init__(self, name):
        if name not in ARITY:
            raise ValueError(f"unknown primitive {name!r}")
        self.name = name
        self._hash = hash(("prim", name))

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (type(other) is Prim and other.name == self.name)


class Num(Term):
    __slots__ = ("n",)

    def __init__(self, n):
        n = int(n)
        if n < 0:
            raise ValueError("numerals are non-negative")
        self.n = n
        self._hash = hash(("num", n))

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (type(other) is Num and other.n == self.n)


class Pair(Term):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self._hash = hash(("pair", left._hash, right._hash))

    __hash__ = Term.__hash__

    def __eq__(self, other):
        if self is other:
            return True
        return (type(other) is Pair and other._hash == self._hash
                and other.left == self.left and other.right == self.right)


class Seq(Term):
    __slots__ = ("items",)

    def __init__(self, items=()):
        self.items = tuple(items)
        self._hash = hash(("seq",) + tuple(t._hash for t in self.items))

    __hash__ = Term.__hash__

    def __eq__(self, other):
        if self is other:
            return True
        return (type(other) is Seq and other._hash == self._hash
                and other.items == self.items)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


class App(Term):
    __slots__ = ("fun", "arg")

    def __init__(self, fun, arg):
        self.fun = fun
        self.arg = arg
        self._hash = hash(("app", fun._hash, arg._hash))

    __hash__ = Term.__hash__

    def __eq__(self, other):
        if self is other:
            return True
        return (type(other) is App and other._hash == self._hash
                and other.fun == self.fun and other.arg == self.arg)


class Var(Term):
    """A named hole; only legal inside bodies handed to :func:`abstract`."""

    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name
        self._hash = hash(("var", name))

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (type(other) is Var and other.name == self.name)


S = Comb("S")
K = Comb("K")

# len/proj/cat/succ/ncase/fst/snd are the documented core; unit, mkpair, rec,
# cmap and eq exist so that realizers can build codes and dispatch on them.
ARITY = {
    "len": 1,
    "proj": 2,
    "cat": 2,
    "succ": 1,
    "ncase": 3,
    "fst": 1,
    "snd": 1,
    "unit": 1,
    "mkpair": 2,
    "rec": 3,
    "cmap": 2,
    "eq": 4,
}

LEN, PROJ, CAT, SUCC, NCASE, FST, SND, UNIT, MKPAIR, REC, CMAP, EQ = (
    Prim(name) for name in ARITY)

EMPTY = Seq(())

_TAGS = {Comb: 0, Prim: 1, Num: 2, Pair: 3, Seq: 4, App: 5, Var: 6}


def term_key(t: Term):
    """Structural order: constructor tag first, then children."""
    return _term_key(t)


@lru_cache(maxsize=200_000)
def _term_key(t):
    kind = type(t)
    tag = _TAGS[kind]
    if kind is Comb or kind is Prim or kind is Var:
        return (tag, t.name)
    if kind is Num:
        return (tag, t.n)
    if kind is Pair:
        return (tag, _term_key(t.left), _term_key(t.right))
    if kind is Seq:
        return (tag, len(t.items), tuple(_term_key(i) for i in t.items))
    return (tag, _term_key(t.fun), _term_key(t.arg))


def sort_terms(terms: Iterable[Term]) -> list[Term]:
    return sorted(terms, key=term_key)


# -- construction helpers --------------------------------------------------

def app(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def num(n: int) -> Num:
    return Num(n)


def pair(a: Term, b: Term) -> Pair:
    return Pair(a, b)


def seq(*items: Term) -> Seq:
    return Seq(items)


I = App(App(S, K), K)


# -- printing and parsing --------------------------------------------------

def show(t: Term) -> str:
    kind = type(t)
    if kind is Comb or kind is Prim:
        return t.name
    if kind is Num:
        return f"(num {t.n})"
    if kind is Pair:
        return f"(pair {show(t.left)} {show(t.right)})"
    if kind is Seq:
        return "(seq" + "".join(" " + show(i) for i in t.items) + ")"
    if kind is App:
        return f"(app {show(t.fun)} {show(t.arg)})"
    if kind is Var:
        return f"${t.name}"
    raise TypeError(t)


def from_sexpr(form) -> Term:
    if isinstance(form, str):
        if form == "S":
            return S
        if form == "K":
            return K
        if form in ARITY:
            return Prim(form)
        if form.startswith("$") and len(form) > 1:
            return Var(form[1:])
        raise ParseError(f"unknown atom {form!r}", position(form))
    if not form:
        raise ParseError("empty term", position(form))
    tag = form[0]
    args = form[1:]
    if tag == "num":
        if len(args) != 1 or not isinstance(args[0], str) or not args[0].isdigit():
            raise ParseError("(num N) needs one natural number", position(form))
        return Num(int(args[0]))
    if tag == "pair":
        if len(args) != 2:
            raise ParseError("(pair t u) needs two terms", position(form))
        return Pair(from_sexpr(args[0]), from_sexpr(args[1]))
    if tag == "seq":
        return Seq(from_sexpr(a) for a in args)
    if tag == "app":
        if len(args) < 2:
            raise ParseError("(app t u) needs at least two terms", position(form))
        return app(*(from_sexpr(a) for a in args))
    raise ParseError(f"unknown term constructor {dump(tag)!r}", position(form))


def parse(text: str) -> Term:
    return from_sexpr(read_one(text))


# -- evaluation ------------------------------------------------------------

@dataclass(frozen=True)
class Value:
    term: Term
    steps: int = 0


@dataclass(frozen=True)
class Diverged:
    steps: int


@dataclass(frozen=True)
class Stuck:
    reason: str
    steps: int = 0


EvalResult = Value | Diverged | Stuck


class _OutOfFuel(Exception):
    pass


class _StuckError(Exception):
    pass


class _Machine:
    __slots__ = ("fuel", "steps", "wmemo", "nmemo")

    def __init__(self, fuel):
        self.fuel = fuel
        self.steps = 0
        self.wmemo = {}
        self.nmemo = {}

    def tick(self):
        self.steps += 1
        if self.steps > self.fuel:
            raise _OutOfFuel

    def whnf(self, t):
        hit = self.wmemo.get(t)
        if hit is not None:
            return hit
        start = t
        stack = []
        while True:
            while type(t) is App:
                stack.append(t.arg)
                t = t.fun
            kind = type(t)
            if kind is Comb:
                if t is S or t.name == "S":
                    if len(stack) < 3:
                        break
                    x = stack.pop()
                    y = stack.pop()
                    z = stack.pop()
                    self.tick()
                    t = App(App(x, z), App(y, z))
                    continue
                if len(stack) < 2:
                    break
                x = stack.pop()
                stack.pop()
                self.tick()
                t = x
                continue
            if kind is Prim:
                arity = ARITY[t.name]
                if len(stack) < arity:
                    break
                args = [stack.pop() for _ in range(arity)]
                self.tick()
                t = self.delta(t.name, args)
                continue
            if kind is Var:
                raise _StuckError(f"free variable ${t.name}")
            if stack:
                raise _StuckError(f"cannot apply {show(t)}")
            break
        res = t
        while stack:
            res = App(res, stack.pop())
        self.wmemo[start] = res
        return res

    def seq_arg(self, t, op):
        v = self.whnf(t)
        if type(v) is not Seq:
            raise _StuckError(f"{op} expects a sequence code, got {show(v)}")
        return v

    def num_arg(self, t, op):
        v = self.whnf(t)
        if type(v) is not Num:
            raise _StuckError(f"{op} expects a numeral, got {show(v)}")
        return v.n

    def delta(self, name, a):
        if name == "len":
            return Num(len(self.seq_arg(a[0], name).items))
        if name == "proj":
            s = self.seq_arg(a[0], name)
            i = self.num_arg(a[1], name)
            if not 1 <= i <= len(s.items):
                raise _StuckError(f"proj index {i} outside 1..{len(s.items)}")
            return s.items[i - 1]
        if name == "cat":
            return Seq(self.seq_arg(a[0], name).items + self.seq_arg(a[1], name).items)
        if name == "succ":
            return Num(self.num_arg(a[0], name) + 1)
        if name == "ncase":
            n = self.num_arg(a[0], name)
            return a[1] if n == 0 else App(a[2], Num(n - 1))
        if name == "fst" or name == "snd":
            p = self.whnf(a[0])
            if type(p) is not Pair:
                raise _StuckError(f"{name} expects a pair, got {show(p)}")
            return p.left if name == "fst" else p.right
        if name == "unit":
            return Seq((a[0],))
        if name == "mkpair":
            return Pair(a[0], a[1])
        if name == "rec":
            n = self.num_arg(a[2], name)
            if n == 0:
                return a[0]
            return App(a[1], app(REC, a[0], a[1], Num(n - 1)))
        if name == "cmap":
            items = self.seq_arg(a[1], name).items
            out = EMPTY
            for item in reversed(items):
                out = app(CAT, App(a[0], item), out)
            return out
        if name == "eq":
            same = self.nf(a[0]) == self.nf(a[1])
            return a[2] if same else a[3]
        raise AssertionError(name)

    def nf(self, t):
        hit = self.nmemo.get(t)
        if hit is not None:
            return hit
        w = self.whnf(t)
        kind = type(w)
        if kind is Pair:
            res = Pair(self.nf(w.left), self.nf(w.right))
        elif kind is Seq:
            res = Seq(self.nf(i) for i in w.items)
        elif kind is App:
            args = []
            h = w
            while type(h) is App:
                args.append(h.arg)
                h = h.fun
            res = h
            for a in reversed(args):
                res = App(res, self.nf(a))
        else:
            res = w
        self.nmemo[t] = res
        self.nmemo[res] = res
        return res


_CACHE: dict[Term, tuple] = {}
_CACHE_LIMIT = 400_000


def _run(t: Term, fuel: int) -> EvalResult:
    machine = _Machine(fuel)
    try:
        v = machine.nf(t)
    except _OutOfFuel:
        return Diverged(fuel)
    except _StuckError as e:
        return Stuck(str(e), machine.steps)
    except RecursionError:
        return Diverged(machine.steps)
    return Value(v, machine.steps)


def normalize(t: Term, fuel: int = DEFAULT_FUEL) -> EvalResult:
    """Full normal form of ``t`` within ``fuel`` reduction steps.

    Results are cached per term.  A cached value or stuck outcome needing
    ``k`` steps answers any query with fuel >= k; a cached divergence at
    fuel ``F`` answers queries with fuel <= F.
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    hit = _CACHE.get(t)
    if hit is not None:
        res = hit[0]
        if isinstance(res, Diverged):
            if fuel <= res.steps:
                return Diverged(fuel)
        elif res.steps <= fuel:
            return res
        else:
            return Diverged(fuel)
    res = _run(t, fuel)
    if len(_CACHE) > _CACHE_LIMIT:
        _CACHE.clear()
    _CACHE[t] = (res,)
    return res


def apply(f: Term, a: Term, fuel: int = DEFAULT_FUEL) -> EvalResult:
    return normalize(App(f, a), fuel)


def evaluate(f: Term, *args: Term, fuel: int = DEFAULT_FUEL) -> EvalResult:
    return normalize(app(f, *args), fuel)


def canonical(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    res = normalize(t, fuel)
    if isinstance(res, Value):
        return res.term
    raise ValueError(f"term has no normal form within fuel: {res}")


def constant_value(t: Term) -> Term | None:
    """If normal-form ``t`` is ``K v``, then ``t`` sends every argument to ``v``."""
    if type(t) is App and t.fun == K:
        return t.arg
    return None


# -- combinatory abstraction -----------------------------------------------

@lru_cache(maxsize=100_000)
def free_vars(t: Term) -> frozenset:
    kind = type(t)
    if kind is Var:
        return frozenset((t.name,))
    if kind is App:
        return free_vars(t.fun) | free_vars(t.arg)
    if kind is Pair:
        return free_vars(t.left) | free_vars(t.right)
    if kind is Seq:
        return frozenset(chain.from_iterable(free_vars(i) for i in t.items))
    return frozenset()


class UnboundVariable(ValueError):
    pass


def _abs(x: str, body: Term) -> Term:
    if x not in free_vars(body):
        return App(K, body)
    kind = type(body)
    if kind is Var:
        return I
    if kind is App:
        if body.arg == Var(x) and x not in free_vars(body.fun):
            return body.fun
        return app(S, _abs(x, body.fun), _abs(x, body.arg))
    if kind is Pair:
        return _abs(x, app(MKPAIR, body.left, body.right))
    if kind is Seq:
        out = EMPTY
        for item in reversed(body.items):
            out = app(CAT, App(UNIT, item), out) if out != EMPTY else App(UNIT, item)
        return _abs(x, out)
    raise AssertionError(body)


def abstract(var: str, body: Term, bound: Iterable[str] = ()) -> Term:
    """Combinatory abstraction: a term ``T`` with ``T a`` reducing to ``body[var:=a]``.

    ``bound`` lists the names an enclosing abstraction will still bind; any
    other free variable left over is an error.
    """
    out = _abs(var, body)
    leftover = free_vars(out) - set(bound)
    if leftover:
        raise UnboundVariable(f"unbound variables remain: {sorted(leftover)}")
    return out


def lam(*names_and_body) -> Term:
    """``lam("x", "y", body)`` is the closed term for the curried function."""
    *names, body = names_and_body
    for i, name in enumerate(reversed(names)):
        body = abstract(name, body, bound=names[: len(names) - 1 - i])
    return body


def substitute(body: Term, var: str, value: Term) -> Term:
    kind = type(body)
    if kind is Var:
        return value if body.name == var else body
    if var not in free_vars(body):
        return body
    if kind is App:
        return App(substitute(body.fun, var, value), substitute(body.arg, var, value))
    if kind is Pair:
        return Pair(substitute(body.left, var, value), substitute(body.right, var, value))
    if kind is Seq:
        return Seq(substitute(i, var, value) for i in body.items)
    return body


# -- sequence codes (meta level) -------------------------------------------

def seq_code(items: Sequence[Term]) -> Seq:
    return Seq(items)


def _as_seq(t: Term, op: str) -> Seq:
    if type(t) is not Seq:
        raise TypeError(f"{op}: not a sequence code: {show(t)}")
    return t


def seq_len(t: Term) -> int:
    return len(_as_seq(t, "seq_len").items)


def seq_proj(t: Term, i: int) -> Term:
    items = _as_seq(t, "seq_proj").items
    if not 1 <= i <= len(items):
        raise IndexError(f"index {i} outside 1..{len(items)}")
    return items[i - 1]


def seq_concat(*codes: Term) -> Seq:
    return Seq(chain.from_iterable(_as_seq(c, "seq_concat").items for c in codes))


def support(t: Term) -> frozenset:
    return frozenset(_as_seq(t, "support").items)


def seq_leq(m: Term, n: Term) -> bool:
    """``m`` below ``n``: every component of ``m`` occurs in ``n``."""
    comps = set(_as_seq(n, "seq_leq").items)
    return all(c in comps for c in _as_seq(m, "seq_leq").items)


def is_seq(t: Term) -> bool:
    return type(t) is Seq


def numerals(t: Term) -> list[int]:
    out = []
    for c in _as_seq(t, "numerals").items:
        if type(c) is not Num:
            raise TypeError(f"component {show(c)} is not a numeral")
        out.append(c.n)
    return out
