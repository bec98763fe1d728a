"""Finite sets of labels and function tables between them."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Hashable, Iterable, Mapping

from .sexpr import ParseError, Symbol, dump, head, position

Label = Hashable


def label_key(x):
    """Total order on labels: numbers, then strings, then tuples."""
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        return (1, str(x))
    if isinstance(x, tuple):
        return (2, len(x), tuple(label_key(i) for i in x))
    return (3, repr(x))


def sort_labels(xs: Iterable) -> tuple:
    return tuple(sorted(set(xs), key=label_key))


def show_label(x) -> str:
    if isinstance(x, tuple):
        return "(" + " ".join(show_label(i) for i in x) + ")"
    return str(x)


def label_from_sexpr(form):
    if isinstance(form, list):
        return tuple(label_from_sexpr(f) for f in form)
    text = str(form)
    if text.isdigit():
        return int(text)
    return text


@dataclass(frozen=True)
class FiniteMap:
    dom: tuple
    cod: tuple
    pairs: tuple  # ((x, f x), ...) in domain order

    @classmethod
    def of(cls, dom: Iterable, cod: Iterable, table: Mapping | None = None, fn=None):
        dom = sort_labels(dom)
        cod = sort_labels(cod)
        if fn is not None:
            table = {x: fn(x) for x in dom}
        table = dict(table or {})
        if set(table) != set(dom):
            raise ValueError("function table must be total on its domain")
        codset = set(cod)
        for x in dom:
            if table[x] not in codset:
                raise ValueError(f"{x!r} is sent outside the codomain")
        return cls(dom, cod, tuple((x, table[x]) for x in dom))

    def __call__(self, x):
        return self.table[x]

    @property
    def table(self) -> dict:
        return dict(self.pairs)

    def fiber(self, y) -> tuple:
        return tuple(x for x, fx in self.pairs if fx == y)

    def image(self) -> tuple:
        return sort_labels(fx for _, fx in self.pairs)

    def is_injective(self) -> bool:
        return len(self.image()) == len(self.dom)

    def is_surjective(self) -> bool:
        return set(self.image()) == set(self.cod)

    def compose(self, g: "FiniteMap") -> "FiniteMap":
        """``g`` after ``self``."""
        return FiniteMap.of(self.dom, g.cod, {x: g(fx) for x, fx in self.pairs})

    def to_sexpr(self) -> str:
        body = "".join(f" ({show_label(x)} {show_label(y)})" for x, y in self.pairs)
        return (f"(function (dom {' '.join(show_label(x) for x in self.dom)})"
                f" (cod {' '.join(show_label(y) for y in self.cod)}){body})")


def identity(xs: Iterable) -> FiniteMap:
    return FiniteMap.of(xs, xs, fn=lambda x: x)


def all_maps(dom: Iterable, cod: Iterable):
    dom = sort_labels(dom)
    cod = sort_labels(cod)
    for values in product(cod, repeat=len(dom)):
        yield FiniteMap(dom, cod, tuple(zip(dom, values)))


def pullback(f: FiniteMap, g: FiniteMap):
    """Apex and legs of the pullback of ``f: X -> Y`` and ``g: Z -> Y``."""
    if f.cod != g.cod:
        raise ValueError("pullback needs a common codomain")
    apex = sort_labels((x, z) for x in f.dom for z in g.dom if f(x) == g(z))
    p1 = FiniteMap.of(apex, f.dom, fn=lambda xz: xz[0])
    p2 = FiniteMap.of(apex, g.dom, fn=lambda xz: xz[1])
    return apex, p1, p2


def is_pullback(p1: FiniteMap, p2: FiniteMap, f: FiniteMap, g: FiniteMap) -> bool:
    if p1.dom != p2.dom or p1.cod != f.dom or p2.cod != g.dom or f.cod != g.cod:
        return False
    if any(f(p1(w)) != g(p2(w)) for w in p1.dom):
        return False
    pairs = [(p1(w), p2(w)) for w in p1.dom]
    expected = {(x, z) for x in f.dom for z in g.dom if f(x) == g(z)}
    return len(set(pairs)) == len(pairs) and set(pairs) == expected


def map_from_sexpr(form) -> FiniteMap:
    if head(form) != "function":
        raise ParseError("expected (function (dom ...) (cod ...) (x y) ...)", position(form))
    dom = cod = None
    table = {}
    for item in form[1:]:
        h = head(item)
        if h == "dom":
            dom = [label_from_sexpr(x) for x in item[1:]]
        elif h == "cod":
            cod = [label_from_sexpr(x) for x in item[1:]]
        elif isinstance(item, list) and len(item) == 2:
            table[label_from_sexpr(item[0])] = label_from_sexpr(item[1])
        else:
            raise ParseError(f"bad function entry {dump(item)}", position(item))
    if dom is None:
        dom = list(table)
    if cod is None:
        cod = list(table.values())
    try:
        return FiniteMap.of(dom, cod, table)
    except ValueError as e:
        raise ParseError(str(e), position(form)) from None


__all__ = ["FiniteMap", "Label", "Symbol", "all_maps", "identity", "is_pullback",
           "label_from_sexpr", "label_key", "map_from_sexpr", "pullback", "show_label",
           "sort_labels"]
