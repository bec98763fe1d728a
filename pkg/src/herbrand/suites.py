"""Property suites over generated instances, shared by the CLI demos and the tests."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations, permutations, product as cartesian
from typing import Callable

from . import assemblies as asm
from . import pca
from . import principles as pr
from . import sigma as sg
from . import tripos as tp
from .assemblies import CaseResult
from .finsets import FiniteMap, all_maps, pullback
from .pca import I, K, Num, S, Seq
from .sigma import DEFAULT, Holds, ProbeConfig

CODE_POOL = (Num(0), Num(1), K, S)


@dataclass
class SuiteReport:
    name: str
    cases: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> int:
        return sum(1 for c in self.cases if c.ok)

    @property
    def failed(self) -> int:
        return len(self.cases) - self.passed

    @property
    def ok(self) -> bool:
        return bool(self.cases) and self.failed == 0

    def failures(self) -> list:
        return [c for c in self.cases if not c.ok]

    def summary(self) -> str:
        return f"{self.name}: {self.passed} passed, {self.failed} failed ({self.elapsed:.1f}s)"


def _run(name: str, body: Callable[[list], None]) -> SuiteReport:
    rep = SuiteReport(name)
    start = time.perf_counter()
    body(rep.cases)
    rep.elapsed = time.perf_counter() - start
    return rep


# -- generators -------------------------------------------------------------------


def subsets(xs) -> list:
    xs = list(xs)
    return [frozenset(c) for k in range(len(xs) + 1) for c in combinations(xs, k)]


def antichains(elems) -> list:
    """Every antichain of subsets of ``elems``."""
    subs = subsets(elems)
    out = []
    for fam in subsets(range(len(subs))):
        sets = [subs[i] for i in fam]
        if all(not (a < b) for a in sets for b in sets):
            out.append(sets)
    return out


def all_atoms(pool=CODE_POOL[:3], max_size: int = 2) -> list:
    """Every atom whose code set has at most ``max_size`` elements of ``pool``."""
    out = []
    for a1 in subsets(pool):
        if len(a1) > max_size:
            continue
        for fam in antichains(sorted(a1)):
            out.append(sg.mk_atom(fam, a1))
    return out


def random_atom(rng: random.Random, pool=CODE_POOL, max_size: int = 2) -> sg.Atom:
    a1 = rng.sample(list(pool), rng.randint(0, max_size))
    fams = antichains(sorted(a1))
    return sg.mk_atom(rng.choice(fams), a1)


def random_predicate(rng, index) -> tp.Predicate:
    return tp.Predicate.of({x: random_atom(rng) for x in index})


def random_assembly(rng, size: int, pool=CODE_POOL, name: str = "") -> asm.Assembly:
    codes = frozenset(rng.sample(list(pool), rng.randint(1, len(pool))))
    fams = [f for f in antichains(sorted(codes)) if f]
    carrier = list(range(size))
    return asm.Assembly.of(carrier, codes, {a: rng.choice(fams) for a in carrier}, name)


def random_partitioned(rng, size: int, pool=CODE_POOL, name: str = "") -> asm.Assembly:
    codes = frozenset(rng.sample(list(pool), rng.randint(1, len(pool))))
    carrier = list(range(size))
    return asm.Assembly.of(carrier, codes,
                           {a: [{rng.choice(sorted(codes))}] for a in carrier}, name)


def _maps(src: asm.Assembly, tgt: asm.Assembly):
    return all_maps(src.carrier, tgt.carrier)


# -- Heyting laws -------------------------------------------------------------------


def heyting_laws(pairs: int = 200, seed: int = 0, cfg: ProbeConfig = DEFAULT) -> SuiteReport:
    """Synthesized realizers for the connective laws on random atom pairs."""

    def body(cases):
        rng = random.Random(seed)
        for i in range(pairs):
            xs = list(range(rng.randint(1, 3)))
            phi, psi = random_predicate(rng, xs), random_predicate(rng, xs)
            chi = random_predicate(rng, xs)
            c, d = tp.conj_pred(phi, psi), tp.disj_pred(phi, psi)
            laws = [
                ("and-elim-left", c, phi, tp.synth_fst()),
                ("and-elim-right", c, psi, tp.synth_snd()),
                ("and-intro", c, c, tp.synth_pair(tp.synth_fst(), tp.synth_snd())),
                ("or-intro-left", phi, d, tp.synth_inl()),
                ("or-intro-right", psi, d, tp.synth_inr()),
                ("or-elim", d, d, tp.synth_disj_elim(tp.synth_inl(), tp.synth_inr())),
                ("curry", phi, tp.imp_pred(psi, c), tp.synth_curry(I)),
                ("uncurry", c, c, tp.synth_uncurry(tp.synth_curry(I))),
                ("evaluation", tp.conj_pred(tp.imp_pred(psi, chi), psi), chi, tp.synth_eval()),
                ("compose", c, phi, tp.synth_compose(tp.synth_identity(), tp.synth_fst())),
            ]
            for name, a, b, r in laws:
                rep = tp.check_entailment(a, b, r, cfg)
                cases.append(CaseResult(f"{i}:{name}", rep.holds,
                                        "" if rep.holds else str(rep.outcome)))

    return _run("heyting-laws", body)


# -- exponential isomorphism -----------------------------------------------------------


def _all_sequences(elems, max_len):
    out = []
    for k in range(max_len + 1):
        out.extend(Seq(p) for p in cartesian(elems, repeat=k))
    return out


def _equiv(m, n) -> bool:
    return pca.seq_leq(m, n) and pca.seq_leq(n, m)


def _pair_leq(p, q) -> bool:
    return pca.seq_leq(p.left, q.left) and pca.seq_leq(p.right, q.right)


def exponential_iso(max_len: int = 3, cfg: ProbeConfig = DEFAULT) -> SuiteReport:
    """Iso and inverse terms on every code of bounded length over a 2+2 tagged set."""

    def body(cases):
        iso, inv = sg.exp_iso()
        left, right = [Num(0), K], [Num(1), S]
        tagged = [sg.tag0(x) for x in left] + [sg.tag1(y) for y in right]
        codes = _all_sequences(tagged, max_len)
        pairs = [pca.Pair(x, y) for x in _all_sequences(left, max_len)
                 for y in _all_sequences(right, max_len)]
        fwd = {m: pca.apply(iso, m, cfg.fuel) for m in codes}
        bwd = {q: pca.apply(inv, q, cfg.fuel) for q in pairs}
        ok = all(isinstance(r, pca.Value) for r in list(fwd.values()) + list(bwd.values()))
        cases.append(CaseResult("defined everywhere", ok))
        if not ok:
            return
        fwd = {m: r.term for m, r in fwd.items()}
        bwd = {q: r.term for q, r in bwd.items()}
        bad = [m for m in codes
               if not _equiv(pca.apply(inv, fwd[m], cfg.fuel).term, m)]
        cases.append(CaseResult("inverse after iso", not bad, str(bad[:1])))
        bad = []
        for q in pairs:
            back = pca.apply(iso, bwd[q], cfg.fuel).term
            if not (_equiv(back.left, q.left) and _equiv(back.right, q.right)):
                bad.append(q)
        cases.append(CaseResult("iso after inverse", not bad, str(bad[:1])))
        bad = [(m, n) for m in codes for n in codes
               if pca.seq_leq(m, n) and not _pair_leq(fwd[m], fwd[n])]
        cases.append(CaseResult("iso preserves order", not bad, str(bad[:1])))
        bad = [(p, q) for p in pairs for q in pairs
               if _pair_leq(p, q) and not pca.seq_leq(bwd[p], bwd[q])]
        cases.append(CaseResult("inverse preserves order", not bad, str(bad[:1])))
        meta = all(sg.iso_split(m) == (fwd[m].left, fwd[m].right) for m in codes)
        cases.append(CaseResult("matches the meta-level split", meta))

    return _run("exponential-iso", body)


# -- quantifiers ---------------------------------------------------------------------


def exists_oracle_support(parts, cfg: ProbeConfig = DEFAULT):
    """Direct evaluation of the existential image on supports of size at most 3.

    Returns ``(universe, verdicts)`` where ``verdicts`` maps each support to
    ``(potential, actual)``.  A code ``m`` is potential when each component is
    a sequence over the code set of some fibre value; it is actual when in
    addition some component is an actual realizer of some fibre value.
    """
    universe = set()
    for a in parts:
        elems = pca.sort_terms(a.a1)
        for k in range(max(cfg.probe_len, len(elems)) + 1):
            for combo in combinations(elems, k):
                for perm in permutations(combo):
                    universe.add(Seq(perm))
    foreign = Seq((Num(99),))
    cands = sorted(universe, key=pca.term_key) + [foreign]
    verdicts = {}
    for k in range(4):
        for supp in combinations(cands, k):
            pot = all(c in universe for c in supp)
            act = pot and any(
                all(sg.codes_contain(a.a1, t) for t in c.items)
                and any(g <= set(c.items) for g in a.gens.members)
                for c in supp for a in parts)
            verdicts[frozenset(supp)] = (pot, act)
    return frozenset(universe), verdicts


def quantifier_adjunctions(max_size: int = 3, predicates: int = 50, seed: int = 0,
                           cfg: ProbeConfig = DEFAULT) -> SuiteReport:
    """All four transposes and the exact existential image on every small function."""

    def body(cases):
        rng = random.Random(seed)
        labels = list(range(max_size))
        funcs = [f for a in range(max_size + 1) for b in range(max_size + 1)
                 for f in all_maps(labels[:a], labels[:b])]
        oracle_memo: dict = {}
        for fi, f in enumerate(funcs):
            for j in range(predicates):
                phi = random_predicate(rng, f.dom)
                chi = random_predicate(rng, f.cod)
                ex = tp.exists_along(f, phi, cfg)
                fchi = tp.reindex(f, chi)
                checks = [
                    ("exists-down", phi, tp.reindex(f, ex), tp.exists_transpose_down(I)),
                    ("exists-up", tp.exists_along(f, fchi, cfg), chi, tp.exists_transpose_up(I)),
                    ("exists-up-down", ex, ex,
                     tp.exists_transpose_up(tp.exists_transpose_down(I))),
                    ("exists-down-up", fchi, fchi,
                     tp.exists_transpose_down(tp.exists_transpose_up(I))),
                    ("forall-up", chi, tp.forall_along(f, fchi), tp.forall_transpose_up(I)),
                    ("forall-down", tp.reindex(f, tp.forall_along(f, phi)), phi,
                     tp.forall_transpose_down(I)),
                    ("forall-up-down", tp.forall_along(f, phi), tp.forall_along(f, phi),
                     tp.forall_transpose_up(tp.forall_transpose_down(I))),
                    ("forall-down-up", fchi, fchi,
                     tp.forall_transpose_down(tp.forall_transpose_up(I))),
                ]
                for name, a, b, r in checks:
                    rep = tp.check_entailment(a, b, r, cfg)
                    cases.append(CaseResult(f"{fi}.{j}:{name}", rep.holds,
                                            "" if rep.holds else str(rep.outcome)))
                ok = True
                for y in f.cod:
                    parts = tuple(phi(x) for x in f.fiber(y))
                    key = frozenset(parts)
                    if key not in oracle_memo:
                        oracle_memo[key] = _compare_exists(parts, cfg)
                    ok = ok and oracle_memo[key]
                cases.append(CaseResult(f"{fi}.{j}:exists-oracle", ok))

    return _run("quantifiers", body)


def _compare_exists(parts, cfg) -> bool:
    value = tp.exists_value(parts, cfg)
    universe, verdicts = exists_oracle_support(parts, cfg)
    if value.a1 != universe:
        return False
    for supp, (pot, act) in verdicts.items():
        m = Seq(pca.sort_terms(supp))
        if isinstance(sg.potential_member(value, m, cfg), Holds) != pot:
            return False
        if isinstance(sg.actual_member(value, m, cfg), Holds) != act:
            return False
    return True


def beck_chevalley(squares: int = 20, seed: int = 0, cfg: ProbeConfig = DEFAULT,
                   with_forall: bool = True) -> SuiteReport:
    def body(cases):
        rng = random.Random(seed)
        for i in range(squares):
            xs = list(range(rng.randint(0, 3)))
            ys = list(range(rng.randint(1, 3)))
            zs = list(range(rng.randint(0, 3)))
            f = FiniteMap.of(xs, ys, {x: rng.choice(ys) for x in xs})
            g = FiniteMap.of(zs, ys, {z: rng.choice(ys) for z in zs})
            _, p1, p2 = pullback(f, g)
            phi = random_predicate(rng, xs)
            rep = tp.beck_chevalley_check(p1, p2, f, g, phi, cfg, with_forall)
            cases.append(CaseResult(f"square {i} exists identical", rep.exists_equal,
                                    str(rep.mismatches)))
            cases.append(CaseResult(f"square {i} exists entailments",
                                    all(r.holds for r in rep.exists_entailments)))
            if with_forall:
                cases.append(CaseResult(f"square {i} forall entailments",
                                        all(r.holds for r in rep.forall_entailments)))

    return _run("beck-chevalley", body)


# -- double negation and weak excluded middle --------------------------------------------


def double_negation(cfg: ProbeConfig = DEFAULT) -> SuiteReport:
    def body(cases):
        for a in all_atoms():
            inh = bool(a.gens)
            ok = sg.nn_actual_inhabited(a, cfg) == inh
            w = sg.actual_member(sg.Not(sg.Not(a)), sg.NN_WITNESS, cfg)
            ok = ok and (sg.passes(w) if inh else isinstance(w, sg.Fails))
            cases.append(CaseResult(sg.tv_to_sexpr(a), ok, str(w)))

    return _run("double-negation", body)


def wlem(cfg: ProbeConfig = DEFAULT) -> SuiteReport:
    def body(cases):
        for a in all_atoms():
            res = pr.wlem_check(a, cfg)
            sides = pr.wlem_sides(a, cfg)
            inh = bool(a.gens)
            ok = isinstance(res, Holds) and sides == (not inh, inh)
            cases.append(CaseResult(sg.tv_to_sexpr(a), ok, f"{res} sides={sides}"))

    return _run("wlem", body)


# -- assemblies ---------------------------------------------------------------------------


def _unique(candidates, pred) -> list:
    return [c for c in candidates if pred(c)]


def universal_properties(instances: int = 10, seed: int = 0,
                         cfg: ProbeConfig = DEFAULT) -> SuiteReport:
    """Every cone or cocone on small assemblies factors through a unique mediator."""

    def tracked(m):
        return asm.is_tracked(m, cfg)

    def body(cases):
        rng = random.Random(seed)
        for i in range(instances):
            a = random_assembly(rng, rng.randint(1, 3), name="A")
            b = random_assembly(rng, rng.randint(1, 3), name="B")
            c = random_assembly(rng, rng.randint(1, 3), name="C")
            d = random_assembly(rng, rng.randint(1, 3), name="D")
            tag = f"{i}"
            # products
            prod = asm.product(a, b)
            ok = tracked(prod.fst) and tracked(prod.snd)
            for f, g in cartesian(list(_maps(c, a)), list(_maps(c, b))):
                fm, gm = asm.morphism(c, a, f), asm.morphism(c, b, g)
                meds = _unique(_maps(c, prod.obj),
                               lambda h: all(h(x) == (f(x), g(x)) for x in c.carrier))
                med = prod.pairing(fm, gm)
                ok = ok and len(meds) == 1 and meds[0] == med.fn and tracked(med)
            cases.append(CaseResult(f"{tag}:product", ok))
            # terminal
            ok = all(len(list(_maps(x, asm.terminal()))) == 1 for x in (a, b, c))
            ok = ok and all(tracked(asm.to_terminal(x)) for x in (a, b, c))
            cases.append(CaseResult(f"{tag}:terminal", ok))
            # equalizers
            f = asm.morphism(a, b, rng.choice(list(_maps(a, b))))
            g = asm.morphism(a, b, rng.choice(list(_maps(a, b))))
            eq = asm.equalizer(f, g)
            ok = tracked(eq.incl)
            for h in _maps(c, a):
                if any(f(h(x)) != g(h(x)) for x in c.carrier):
                    continue
                hm = asm.morphism(c, a, h)
                meds = _unique(_maps(c, eq.obj),
                               lambda k: all(eq.incl(k(x)) == h(x) for x in c.carrier))
                med = eq.mediate(hm)
                ok = ok and len(meds) == 1 and meds[0] == med.fn and tracked(med)
            cases.append(CaseResult(f"{tag}:equalizer", ok))
            # sums
            sm = asm.sum_(a, b)
            ok = tracked(sm.inl) and tracked(sm.inr)
            for f2, g2 in cartesian(list(_maps(a, d)), list(_maps(b, d))):
                fm, gm = asm.morphism(a, d, f2), asm.morphism(b, d, g2)
                meds = _unique(_maps(sm.obj, d),
                               lambda k: all(k((0, x)) == f2(x) for x in a.carrier)
                               and all(k((1, y)) == g2(y) for y in b.carrier))
                med = sm.copair(fm, gm)
                ok = ok and len(meds) == 1 and meds[0] == med.fn and tracked(med)
            cases.append(CaseResult(f"{tag}:sum", ok))
            # initial
            ok = all(len(list(all_maps((), x.carrier))) == 1 and tracked(asm.from_initial(x))
                     for x in (a, b))
            cases.append(CaseResult(f"{tag}:initial", ok))
            # coequalizers
            co = asm.coequalizer(f, g)
            ok = tracked(co.quotient)
            for h in _maps(b, d):
                if any(h(f(x)) != h(g(x)) for x in a.carrier):
                    continue
                hm = asm.morphism(b, d, h)
                meds = _unique(_maps(co.obj, d),
                               lambda k: all(k(co.quotient(y)) == h(y) for y in b.carrier))
                med = co.mediate(hm)
                ok = ok and len(meds) == 1 and meds[0] == med.fn and tracked(med)
            cases.append(CaseResult(f"{tag}:coequalizer", ok))
            # factorization
            fac = asm.factorize(f)
            ok = (isinstance(asm.is_super_epi(fac.super_epi, fac.realizer, cfg), Holds)
                  and asm.is_mono(fac.mono) and tracked(fac.super_epi) and tracked(fac.mono)
                  and fac.super_epi.fn.compose(fac.mono.fn) == f.fn)
            cases.append(CaseResult(f"{tag}:factorization", ok))
            # composition and identities
            comp = asm.compose(f, asm.morphism(b, d, rng.choice(list(_maps(b, d)))))
            ok = tracked(comp) and asm.compose(asm.identity(a), f).fn == f.fn
            ok = ok and asm.compose(f, asm.identity(b)).fn == f.fn
            cases.append(CaseResult(f"{tag}:category laws", ok))
            cases.append(CaseResult(f"{tag}:dependent product", _pi_universal(rng, cfg)))

    return _run("universal-properties", body)


def _pi_universal(rng, cfg) -> bool:
    """Transposes across the dependent product are unique and tracked."""
    base = random_assembly(rng, rng.randint(1, 2), name="A")
    mid = random_assembly(rng, rng.randint(1, 3), name="B")
    top = random_assembly(rng, rng.randint(1, 3), name="S")
    f = asm.morphism(mid, base, rng.choice(list(_maps(mid, base))))
    g = asm.morphism(top, mid, {s: rng.choice(mid.carrier) for s in top.carrier})
    pi = asm.pi_along(f, g, cfg)
    if pi.excluded or not asm.is_tracked(pi.evaluation, cfg) or not asm.is_tracked(pi.proj, cfg):
        return False
    x = random_assembly(rng, rng.randint(1, 2), name="X")
    for h in _maps(x, base):
        hm = asm.morphism(x, base, h)
        pb = asm.pullback(hm, f)
        # maps over B: k((x, b)) must lie over b
        options = [g.fn.fiber(b) for _, b in pb.obj.carrier]
        for pick in cartesian(*options):
            k = asm.morphism(pb.obj, top, dict(zip(pb.obj.carrier, pick)))
            meds = []
            for m in _maps(x, pi.obj):
                if any(pi.proj(m(v)) != h(v) for v in x.carrier):
                    continue
                if all(pi.sections[m(v)][1][b] == k((v, b)) for v, b in pb.obj.carrier):
                    meds.append(m)
            if len(meds) != 1:
                return False
            med = asm.pi_transpose(pi, f, hm, k)
            if med.fn != meds[0] or not asm.is_tracked(med, cfg):
                return False
    return True


def _nabla_iso(a: asm.Assembly, cfg) -> bool:
    """An assembly with a common code is isomorphic to the indiscrete one on its carrier."""
    e = asm.find_nabla_code(a)
    if e is None:
        return False
    n = asm.nabla(a.carrier)
    return asm.iso_by_table(a, n, {x: x for x in a.carrier}, cfg)


def pretopos(max_size: int = 3, cfg: ProbeConfig = DEFAULT) -> SuiteReport:
    """Indiscrete images of set constructions against the assembly constructions."""

    def body(cases):
        for nx in range(max_size + 1):
            for ny in range(max_size + 1):
                xs = list(range(nx))
                ys = ["a", "b", "c"][:ny]
                for c in asm.pretopos_preservation_suite(xs, ys, cfg):
                    cases.append(CaseResult(f"|X|={nx} |Y|={ny}: {c.name}", c.ok, c.detail))
        n = asm.nabla(range(3))
        cases.append(CaseResult("indiscrete criterion", isinstance(asm.nabla_like(n, Num(0)),
                                                                   Holds)))
        cases.append(CaseResult("gamma after nabla", asm.gamma(n) == (0, 1, 2)))
        x = asm.Assembly.of([0, 1], {Num(0), K}, {0: [{K}], 1: [{K}, {Num(0)}]})
        cases.append(CaseResult("common code gives nabla", _nabla_iso(x, cfg)))

    return _run("pretopos", body)


def projectivity(instances: int = 50, seed: int = 0, cfg: ProbeConfig = DEFAULT) -> SuiteReport:
    """Sections of super epis onto partitioned assemblies."""

    def body(cases):
        rng = random.Random(seed)
        for i in range(instances):
            tgt = random_partitioned(rng, rng.randint(1, 3), name="P")
            if i % 3 == 0:
                cov = asm.partitioned_cover(tgt)
                p, r = cov.proj, cov.realizer
                kind = "cover"
            else:
                src = random_assembly(rng, rng.randint(len(tgt.carrier), 4), name="B")
                table = {b: tgt.carrier[b % len(tgt.carrier)] for b in src.carrier}
                p = asm.morphism(src, tgt, table)
                r = asm.synth_cover_realizer(p)
                kind = "surjection"
            epi = asm.is_super_epi(p, r, cfg)
            try:
                s = asm.section_of_cover(p, r, cfg)
                ok = (isinstance(epi, Holds) and asm.is_tracked(p, cfg)
                      and all(p(s(a)) == a for a in tgt.carrier) and asm.is_tracked(s, cfg))
                detail = ""
            except ValueError as e:
                ok, detail = False, str(e)
            cases.append(CaseResult(f"{i}:{kind}", ok, detail))

    return _run("projectivity", body)


def partitioned_stability(instances: int = 10, seed: int = 0,
                          cfg: ProbeConfig = DEFAULT) -> SuiteReport:
    def body(cases):
        rng = random.Random(seed)
        for i in range(instances):
            a = random_partitioned(rng, rng.randint(1, 3), name="A")
            b = random_partitioned(rng, rng.randint(1, 3), name="B")
            pp = asm.partitioned_product(a, b)
            ok = (asm.is_partitioned(pp.obj) and asm.is_tracked(pp.fst, cfg)
                  and asm.is_tracked(pp.snd, cfg))
            cases.append(CaseResult(f"{i}:product", ok))
            # a retract: collapse b onto a sub-carrier
            keep = b.carrier[: max(1, len(b.carrier) - 1)]
            sub = b.restrict(keep, "R")
            f = asm.morphism(sub, b, {x: x for x in keep})
            g = asm.morphism(b, sub, {x: x if x in keep else keep[0] for x in b.carrier})
            ret = asm.retract_partitioned(sub, b, f, g)
            ok = (asm.is_partitioned(ret.obj) and asm.is_tracked(ret.to_retract, cfg)
                  and asm.is_tracked(ret.from_retract, cfg))
            cases.append(CaseResult(f"{i}:retract", ok))

    return _run("partitioned", body)


# -- natural numbers and bounds ---------------------------------------------------------------


def nno_recursion(n_max: int = asm.DEFAULT_NMAX, cfg: ProbeConfig = DEFAULT) -> SuiteReport:
    def body(cases):
        z3 = asm.Assembly.of([0, 1, 2], {Num(0), Num(1), Num(2)},
                             {i: [{Num(i)}] for i in range(3)}, "Z3")
        succ3 = asm.morphism(z3, z3, {i: (i + 1) % 3 for i in range(3)})
        counter = asm.nno_recursor(asm.point(z3, 0), succ3, n_max)
        ok = all(counter(n) == n % 3 for n in range(n_max + 1))
        cases.append(CaseResult("mod-3 table", ok))
        cases.append(CaseResult("mod-3 tracking", asm.is_tracked(counter, cfg)))
        for c0 in z3.carrier:
            const = asm.nno_recursor(asm.point(z3, c0), asm.identity(z3), n_max)
            oracle = [c0]
            for _ in range(n_max):
                oracle.append(oracle[-1])
            cases.append(CaseResult(f"constant {c0} table",
                                    [const(n) for n in range(n_max + 1)] == oracle))
            cases.append(CaseResult(f"constant {c0} tracking", asm.is_tracked(const, cfg)))
        n = asm.nno(n_max)
        cases.append(CaseResult("partitioned", asm.is_partitioned(n)))
        cases.append(CaseResult("not indiscrete", asm.find_nabla_code(n) is None))

    return _run("nno", body)


def bounded(tables: int = 60, seed: int = 0, n_max: int = 16,
            cfg: ProbeConfig = DEFAULT) -> SuiteReport:
    """Bounds give trackings and trackings give back the bounds."""

    def body(cases):
        rng = random.Random(seed)
        gs = [tuple([0] * (n_max + 1)), tuple(range(n_max + 1)),
              tuple(min(n * n, 16) for n in range(n_max + 1)), tuple([16] * (n_max + 1))]
        while len(gs) < tables:
            gs.append(tuple(rng.randint(0, 16) for _ in range(n_max + 1)))
        for i, g in enumerate(gs):
            r = pr.tracking_from_bound(g)
            back = pr.bound_from_tracking(r, n_max, cfg.fuel)
            cases.append(CaseResult(f"{i}:round trip", back == g, str(back)))
            fs = [g, tuple([0] * (n_max + 1)), tuple(rng.randint(0, v) for v in g)]
            ok = True
            for f in fs:
                m = pr.bounded_morphism(f, g)
                ok = ok and asm.is_tracked(m, cfg)
            cases.append(CaseResult(f"{i}:tracks f <= g", ok))

    return _run("bounded", body)


# -- trees ------------------------------------------------------------------------------------


def fan(depth: int = 3) -> SuiteReport:
    def body(cases):
        tree = pr.full_tree(2, depth)
        for d in range(1, depth + 1):
            got = pr.fan_bound_extract(pr.length_bar(tree, d, [d]))
            cases.append(CaseResult(f"bar |x| >= {d}: bound", got == d, str(got)))
            try:
                pr.fan_bound_extract(pr.length_bar(tree, d, [d - 1]))
                cases.append(CaseResult(f"bar |x| >= {d}: payload {d - 1} rejected", False))
            except pr.BarViolation as e:
                ok = len(e.path) == d - 1 and e.path in tree.nodes and len(e.path) < d
                cases.append(CaseResult(f"bar |x| >= {d}: payload {d - 1} rejected", ok,
                                        f"witness {e.path}"))

    return _run("fan", body)


def koenig(depth: int = 4) -> SuiteReport:
    def body(cases):
        path, r = pr.koenig_path(pr.full_tree(2, depth), depth)
        cases.append(CaseResult("full binary: leftmost path", path == (0,) * depth, str(path)))
        cases.append(CaseResult("full binary: realizer", all(
            pr.path_tracked(r, p) for p in pr.full_tree(2, depth).paths())))
        path, _ = pr.koenig_path(pr.comb_tree(depth), depth)
        cases.append(CaseResult("comb: spine", path == (0,) * depth, str(path)))
        t = pr.level_bound_tree(depth)
        r = pr.uniform_path_realizer(t, depth)
        cases.append(CaseResult("level bound: every path tracked",
                                all(pr.path_tracked(r, p) for p in t.paths())))
        cases.append(CaseResult("unary: zero bound", pr.level_bounds(pr.unary_tree(depth), depth)
                                == (0,) * depth))
        try:
            pr.koenig_path(pr.full_tree(2, 2), depth)
            cases.append(CaseResult("finite tree rejected", False))
        except ValueError:
            cases.append(CaseResult("finite tree rejected", True))

    return _run("koenig", body)


DEMOS = {
    "wlem": wlem,
    "fan": fan,
    "koenig": koenig,
    "bounded": bounded,
    "heyting-laws": heyting_laws,
    "pretopos": pretopos,
    "double-negation": double_negation,
    "iso": exponential_iso,
    "quantifiers": quantifier_adjunctions,
    "beck-chevalley": beck_chevalley,
    "universal": universal_properties,
    "projectivity": projectivity,
    "partitioned": partitioned_stability,
    "nno": nno_recursion,
}

SEEDED = {"heyting-laws", "quantifiers", "beck-chevalley", "universal", "projectivity",
          "partitioned", "bounded"}

CONFIGURABLE = {"wlem", "bounded", "heyting-laws", "pretopos", "double-negation", "iso",
                "quantifiers", "beck-chevalley", "universal", "projectivity", "partitioned",
                "nno"}

__all__ = ["CODE_POOL", "CONFIGURABLE", "DEMOS", "SEEDED", "SuiteReport", "all_atoms", "antichains",
           "beck_chevalley", "bounded", "double_negation", "exists_oracle_support",
           "exponential_iso", "fan", "heyting_laws", "koenig", "nno_recursion",
           "partitioned_stability", "pretopos", "projectivity", "quantifier_adjunctions",
           "random_assembly", "random_atom", "random_partitioned", "random_predicate", "subsets",
           "universal_properties", "wlem"]
