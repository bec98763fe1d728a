"""Realizer extraction: bounds from trackings, weak excluded middle, trees and bars."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from . import assemblies as asm
from . import pca
from . import sigma as sg
from .finsets import FiniteMap
from .pca import CAT, CMAP, LEN, NCASE, REC, UNIT, App, K, Num, Pair, Seq, Term, Var, lam
from .sexpr import ParseError, dump, head, position, read_all
from .sigma import DEFAULT, ProbeConfig

# -- bounded functions and trackings --------------------------------------------


@dataclass(frozen=True)
class BoundedFunction:
    values: tuple  # f(0), f(1), ...
    bound: tuple  # g(0), g(1), ...

    def __post_init__(self):
        if len(self.values) > len(self.bound):
            raise ValueError("bound must be tabulated wherever the function is")
        for n, (v, b) in enumerate(zip(self.values, self.bound)):
            if v > b:
                raise ValueError(f"f({n}) = {v} exceeds the bound {b}")


UPTO = lam("k", pca.app(REC, Seq((Num(0),)),
                        lam("acc", pca.app(CAT, Var("acc"), App(UNIT, App(LEN, Var("acc"))))),
                        Var("k")))


def table_term(values: Iterable[int]) -> Term:
    """Closed term sending numeral ``n`` to ``values[n]``; the last value repeats beyond."""
    values = list(values)
    if not values:
        raise ValueError("empty table")
    body: Term = App(K, Num(values[-1]))
    for v in reversed(values[:-1]):
        body = lam("k", pca.app(NCASE, Var("k"), Num(v), body))
    return body


def _as_term(g) -> Term:
    if isinstance(g, Term):
        return g
    if isinstance(g, BoundedFunction):
        return table_term(g.bound)
    return table_term(g)


def tracking_from_bound(g) -> Term:
    """``n |-> <0, 1, ..., g(n)>`` for a bound given as a table or a term."""
    return lam("n", App(UPTO, App(_as_term(g), Var("n"))))


def nno_map_tracking(r: Term) -> Term:
    """Lift a numeral-level tracking to codes ``<n1..nk>`` of the natural numbers."""
    return pca.app(CMAP, r)


class BoundError(ValueError):
    def __init__(self, n: int, message: str):
        self.n = n
        super().__init__(f"at {n}: {message}")


def bound_from_tracking(r: Term, n_max: int, fuel: int = pca.DEFAULT_FUEL) -> tuple:
    """``g(n)`` = largest component of ``r n`` for ``n <= n_max``."""
    out = []
    for n in range(n_max + 1):
        res = pca.apply(r, Num(n), fuel)
        if isinstance(res, pca.Diverged):
            raise BoundError(n, "no value within fuel")
        if isinstance(res, pca.Stuck):
            raise BoundError(n, res.reason)
        try:
            comps = pca.numerals(res.term)
        except TypeError as e:
            raise BoundError(n, str(e)) from None
        if not comps:
            raise BoundError(n, "empty sequence bounds nothing")
        out.append(max(comps))
    return tuple(out)


def bounded_morphism(f: Iterable[int], g, n_max: int | None = None) -> asm.Morphism:
    """``f`` as a map of truncated natural numbers, tracked via the bound ``g``.

    The target is truncated at the largest bound value, so every code the
    tracking emits is a numeral of the target.
    """
    table = dict(enumerate(f))
    src = asm.nno(len(table) - 1 if n_max is None else n_max)
    r = tracking_from_bound(g)
    bounds = bound_from_tracking(r, len(src.carrier) - 1)
    BoundedFunction(tuple(table[n] for n in src.carrier), bounds)
    tgt = asm.nno(max(bounds))
    return asm.Morphism(src, tgt, FiniteMap.of(src.carrier, tgt.carrier, table),
                        nno_map_tracking(r))


# -- weak excluded middle ---------------------------------------------------------

WLEM_REALIZER = Pair(sg.NN_WITNESS, sg.NN_WITNESS)


def wlem_realizer() -> Term:
    """A pair of two copies of ``<K <>>``."""
    return WLEM_REALIZER


def wlem_formula(phi: sg.TruthValue) -> sg.TruthValue:
    return sg.disj(sg.neg(phi), sg.neg(sg.neg(phi)))


def wlem_check(phi: sg.TruthValue, cfg: ProbeConfig = DEFAULT):
    return sg.actual_member(wlem_formula(phi), WLEM_REALIZER, cfg)


def wlem_sides(phi: sg.TruthValue, cfg: ProbeConfig = DEFAULT) -> tuple[bool, bool]:
    """Which halves of the realizer are actual: (for not-phi, for not-not-phi)."""
    left = sg.actual_member(sg.neg(phi), WLEM_REALIZER.left, cfg)
    right = sg.actual_member(sg.neg(sg.neg(phi)), WLEM_REALIZER.right, cfg)
    return isinstance(left, sg.Holds), isinstance(right, sg.Holds)


def de_morgan_realizer() -> Term:
    """``not (phi and psi) <= not phi or not psi``: ignore the input, answer both ways."""
    return App(K, WLEM_REALIZER)


def pi01_lem_realizer() -> Term:
    """Excluded middle for a universal over decidable values is realized the same way."""
    return WLEM_REALIZER


# -- trees -------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteTree:
    """A predecessor-closed set of nodes, cut at ``depth``, with a branching bound per node."""

    nodes: frozenset
    depth: int
    bound: tuple = ()  # ((node, z), ...): children of node are at most z

    def __post_init__(self):
        nodes = frozenset(tuple(n) for n in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if () not in nodes:
            raise ValueError("tree must contain the root")
        for n in nodes:
            if len(n) > self.depth:
                raise ValueError(f"node {n} is deeper than {self.depth}")
            if n and n[:-1] not in nodes:
                raise ValueError(f"node {n} has no parent in the tree")
            if any(x < 0 for x in n):
                raise ValueError("node entries are natural numbers")
        given = dict(self.bound)
        table = {}
        for n in sorted(nodes, key=lambda n: (len(n), n)):
            kids = self.children(n)
            z = given.get(n, max(kids, default=0))
            if kids and max(kids) > z:
                raise ValueError(f"bound violation at {n}: child {max(kids)} exceeds {z}")
            table[n] = z
        object.__setattr__(self, "bound", tuple(sorted(table.items(), key=lambda kv: (len(kv[0]), kv[0]))))

    def children(self, node) -> list[int]:
        k = len(node)
        return sorted(n[-1] for n in self.nodes if len(n) == k + 1 and n[:k] == tuple(node))

    def bound_at(self, node) -> int:
        return dict(self.bound)[tuple(node)]

    def level(self, n: int) -> list:
        return sorted(x for x in self.nodes if len(x) == n)

    def paths(self, depth: int | None = None) -> list:
        """Nodes of length ``depth``: the truncations of infinite paths."""
        return self.level(self.depth if depth is None else depth)

    def to_sexpr(self, name: str = "T") -> str:
        def node(n):
            return "(" + " ".join(str(x) for x in n) + ")"
        nodes = " ".join(node(n) for n in sorted(self.nodes, key=lambda n: (len(n), n)))
        bound = " ".join(f"({node(n)} {z})" for n, z in self.bound)
        return f"(tree {name} (depth {self.depth}) (nodes {nodes}) (bound {bound}))"


def tree_from_children(children: Callable[[tuple], Iterable[int]], depth: int,
                       bound: Callable[[tuple], int] | None = None) -> FiniteTree:
    nodes = {()}
    frontier = [()]
    for _ in range(depth):
        nxt = []
        for n in frontier:
            for c in children(n):
                m = n + (c,)
                nodes.add(m)
                nxt.append(m)
        frontier = nxt
    table = () if bound is None else tuple((n, bound(n)) for n in nodes)
    return FiniteTree(frozenset(nodes), depth, table)


def full_tree(branching: int, depth: int) -> FiniteTree:
    return tree_from_children(lambda n: range(branching), depth)


def unary_tree(depth: int) -> FiniteTree:
    return tree_from_children(lambda n: [0], depth)


def level_bound_tree(depth: int) -> FiniteTree:
    """Children of a node at level ``n`` are ``0..n``."""
    return tree_from_children(lambda n: range(len(n) + 1), depth)


def comb_tree(depth: int) -> FiniteTree:
    """A spine of zeros where every spine node also has a dead child 1."""
    return tree_from_children(lambda n: [0, 1] if all(x == 0 for x in n) else [], depth)


def level_bounds(t: FiniteTree, depth: int) -> tuple:
    """``f(n)``: the largest value a path can take at position ``n``."""
    return tuple(max((t.bound_at(x) for x in t.level(n)), default=0) for n in range(depth))


def path_tracked(r: Term, path: Iterable[int], fuel: int = pca.DEFAULT_FUEL) -> bool:
    for n, v in enumerate(path):
        res = pca.apply(r, Num(n), fuel)
        if not isinstance(res, pca.Value) or Num(v) not in res.term.items:
            return False
    return True


def uniform_path_realizer(t: FiniteTree, depth: int | None = None) -> Term:
    """One term whose value at ``n`` contains the ``n``-th entry of every path."""
    depth = t.depth if depth is None else depth
    if depth > t.depth:
        raise ValueError(f"tree is only given to depth {t.depth}")
    f = level_bounds(t, max(depth, 1))
    r = tracking_from_bound(f)
    for p in t.paths(depth):
        if not path_tracked(r, p):
            raise ValueError(f"path {p} escapes the level bound")
    return r


def koenig_path(t: FiniteTree, depth: int | None = None) -> tuple[tuple, Term]:
    """Leftmost path to ``depth`` through nodes that extend that far, with its realizer."""
    depth = t.depth if depth is None else depth
    if depth > t.depth or not t.level(depth):
        raise ValueError(f"tree has no node at depth {depth}")
    deep = set()
    for p in t.level(depth):
        for k in range(depth + 1):
            deep.add(p[:k])
    node: tuple = ()
    while len(node) < depth:
        node = next(node + (c,) for c in t.children(node) if node + (c,) in deep)
    r = uniform_path_realizer(t, depth)
    if not path_tracked(r, node):
        raise AssertionError("uniform realizer misses the chosen path")
    return node, r


# -- bars and the fan bound ------------------------------------------------------------


class BarViolation(ValueError):
    def __init__(self, path: tuple, n: int):
        self.path = path
        self.n = n
        super().__init__(f"node {path} at depth {n} is not in the bar")


@dataclass(frozen=True)
class BarData:
    tree: FiniteTree
    holds: frozenset  # nodes satisfying the bar predicate
    payload: tuple  # candidate depths

    def __post_init__(self):
        holds = frozenset(tuple(n) for n in self.holds)
        object.__setattr__(self, "holds", holds)
        for n in holds:
            for c in self.tree.children(n):
                if n + (c,) not in holds:
                    raise ValueError(f"bar predicate is not inherited from {n} to {n + (c,)}")

    @classmethod
    def from_predicate(cls, tree: FiniteTree, pred: Callable[[tuple], bool], payload) -> "BarData":
        return cls(tree, frozenset(n for n in tree.nodes if pred(n)), tuple(payload))

    def __call__(self, node) -> bool:
        return tuple(node) in self.holds


def fan_bound_extract(bar: BarData) -> int:
    """The maximum of the payload, checked against every path of the tree."""
    if not bar.payload:
        raise ValueError("empty payload")
    n = max(bar.payload)
    if n > bar.tree.depth:
        raise ValueError(f"bound {n} exceeds the tree depth {bar.tree.depth}")
    for p in bar.tree.paths():
        if not bar(p[:n]):
            raise BarViolation(p[:n], n)
    return n


def length_bar(tree: FiniteTree, d: int, payload) -> BarData:
    """The bar of nodes of length at least ``d``."""
    return BarData.from_predicate(tree, lambda x: len(x) >= d, payload)


# -- textual formats ----------------------------------------------------------------------


def _node(form) -> tuple:
    if not isinstance(form, list):
        raise ParseError(f"expected a node list, got {dump(form)}", position(form))
    try:
        return tuple(int(x) for x in form)
    except (TypeError, ValueError):
        raise ParseError(f"node entries must be naturals: {dump(form)}", position(form)) from None


def _int(form) -> int:
    try:
        return int(str(form))
    except ValueError:
        raise ParseError(f"expected a natural number, got {dump(form)}", position(form)) from None


def tree_from_sexpr(form) -> tuple[str, FiniteTree]:
    if head(form) != "tree" or len(form) < 2:
        raise ParseError("expected (tree NAME (depth D) (nodes ...) [(bound ...)])", position(form))
    name = str(form[1])
    depth, nodes, bound = None, None, []
    for item in form[2:]:
        h = head(item)
        if h == "depth" and len(item) == 2:
            depth = _int(item[1])
        elif h == "nodes":
            nodes = [_node(n) for n in item[1:]]
        elif h == "bound":
            for entry in item[1:]:
                if not isinstance(entry, list) or len(entry) != 2:
                    raise ParseError(f"bad bound entry {dump(entry)}", position(entry))
                bound.append((_node(entry[0]), _int(entry[1])))
        else:
            raise ParseError(f"unknown tree field {dump(item)}", position(item))
    if nodes is None:
        raise ParseError("tree needs (nodes ...)", position(form))
    if depth is None:
        depth = max(len(n) for n in nodes)
    try:
        return name, FiniteTree(frozenset(nodes), depth, tuple(bound))
    except ValueError as e:
        raise ParseError(str(e), position(form)) from None


def bar_from_sexpr(form, trees: Mapping[str, FiniteTree]) -> tuple[str, BarData]:
    if head(form) != "bar" or len(form) < 2:
        raise ParseError("expected (bar NAME (tree T) (holds ...) (payload ...))", position(form))
    name = str(form[1])
    tree = holds = payload = None
    for item in form[2:]:
        h = head(item)
        if h == "tree" and len(item) == 2:
            if str(item[1]) not in trees:
                raise ParseError(f"unknown tree {item[1]}", position(item))
            tree = trees[str(item[1])]
        elif h == "holds":
            holds = [_node(n) for n in item[1:]]
        elif h == "length-at-least" and len(item) == 2:
            holds = _int(item[1])
        elif h == "payload":
            payload = tuple(_int(x) for x in item[1:])
        else:
            raise ParseError(f"unknown bar field {dump(item)}", position(item))
    if tree is None or holds is None or payload is None:
        raise ParseError("bar needs tree, holds and payload", position(form))
    try:
        if isinstance(holds, int):
            return name, length_bar(tree, holds, payload)
        return name, BarData(tree, frozenset(holds), payload)
    except ValueError as e:
        raise ParseError(str(e), position(form)) from None


def load_trees(text: str) -> tuple[dict, dict]:
    trees: dict = {}
    bars: dict = {}
    for form in read_all(text):
        if head(form) == "tree":
            name, t = tree_from_sexpr(form)
            trees[name] = t
        elif head(form) == "bar":
            name, b = bar_from_sexpr(form, trees)
            bars[name] = b
        else:
            raise ParseError(f"expected tree or bar, got {dump(form)}", position(form))
    return trees, bars


__all__ = [
    "BarData", "BarViolation", "BoundError", "BoundedFunction", "FiniteTree", "UPTO",
    "WLEM_REALIZER", "bar_from_sexpr", "bound_from_tracking", "bounded_morphism", "comb_tree",
    "de_morgan_realizer", "fan_bound_extract", "full_tree", "koenig_path", "length_bar",
    "level_bound_tree", "level_bounds", "load_trees", "nno_map_tracking", "path_tracked",
    "pi01_lem_realizer", "table_term", "tracking_from_bound", "tree_from_children",
    "tree_from_sexpr", "unary_tree", "uniform_path_realizer", "wlem_check", "wlem_formula",
    "wlem_realizer", "wlem_sides",
]
