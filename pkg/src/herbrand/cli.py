"""Command-line front end: evaluate terms, check realizers, synthesize, run suites."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from importlib import resources

from . import assemblies as asm
from . import pca
from . import principles as pr
from . import sigma as sg
from . import suites
from . import tripos as tp
from .finsets import show_label
from .sexpr import ParseError
from .sigma import Fails, Holds, ProbeConfig, Unknown

EXIT_HOLDS, EXIT_FAILS, EXIT_UNKNOWN, EXIT_MALFORMED = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    fuel: int = pca.DEFAULT_FUEL
    probe_len: int = 2
    n_max: int = asm.DEFAULT_NMAX
    fmt: str = "text"
    imp_depth: int = 3
    max_probes: int = 128

    def __post_init__(self):
        for name in ("fuel", "probe_len", "n_max", "imp_depth", "max_probes"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.fmt not in ("text", "structured"):
            raise ValueError("format must be text or structured")

    def probe_config(self) -> ProbeConfig:
        return ProbeConfig(fuel=self.fuel, probe_len=self.probe_len,
                           max_probes=self.max_probes, imp_depth=self.imp_depth)


def exit_code(outcome) -> int:
    """Exit status as a function of the verification outcome alone."""
    if isinstance(outcome, Holds):
        return EXIT_HOLDS
    if isinstance(outcome, Fails):
        return EXIT_FAILS
    if isinstance(outcome, Unknown):
        return EXIT_UNKNOWN
    raise TypeError(f"not an outcome: {outcome!r}")


def outcome_name(outcome) -> str:
    return {Holds: "holds", Fails: "fails", Unknown: "unknown"}[type(outcome)]


class Reporter:
    """Writes either plain text or ``key=value`` records, one per line."""

    def __init__(self, fmt: str, out=None):
        self.fmt = fmt
        self.out = out or sys.stdout

    def record(self, text: str, **fields):
        if self.fmt == "structured":
            self.out.write(" ".join(f"{k}={_quote(v)}" for k, v in fields.items()) + "\n")
        else:
            self.out.write(text + "\n")


def _quote(v) -> str:
    s = str(v)
    if s == "" or any(c.isspace() or c in '"=' for c in s):
        return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return s


def _read_source(arg: str) -> str:
    """A file's contents when ``arg`` names a file, otherwise ``arg`` itself."""
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _line_col(text: str, pos: int | None) -> str:
    if pos is None or pos < 0:
        return "unknown position"
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return f"line {line}, column {col}"


class Malformed(Exception):
    def __init__(self, message: str, source: str = "", text: str = "", pos=None):
        where = f" ({source}: {_line_col(text, pos)})" if source else ""
        super().__init__(message + where)


def _parse(arg: str, parser):
    text = _read_source(arg)
    try:
        return parser(text)
    except ParseError as e:
        msg = str(e).split(" at position ")[0]
        raise Malformed(msg, arg if os.path.isfile(arg) else "input", text, e.pos) from None
    except (ValueError, TypeError) as e:
        raise Malformed(str(e), arg) from None


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# -- eval -----------------------------------------------------------------------------


def cmd_eval(args, cfg: RunConfig, rep: Reporter) -> int:
    term = _parse(args.term, pca.parse)
    res = pca.normalize(term, cfg.fuel)
    if isinstance(res, pca.Value):
        rep.record(pca.show(res.term), result="value", term=pca.show(res.term), steps=res.steps)
        return EXIT_HOLDS
    if isinstance(res, pca.Diverged):
        rep.record(f"diverged after {res.steps} steps", result="diverged", steps=res.steps)
        return EXIT_UNKNOWN
    rep.record(f"stuck after {res.steps} steps: {res.reason}", result="stuck",
               steps=res.steps, reason=res.reason)
    return EXIT_FAILS


# -- check ---------------------------------------------------------------------------


def _report_entailment(report, rep: Reporter, label: str = "") -> int:
    for r in report.transcript:
        rep.record(f"  {r}", record="probe", check=label, index=show_label(r.index),
                   clause=r.clause, code=pca.show(r.probe), result=outcome_name(r.result),
                   detail=str(r.result))
    out = report.outcome
    prefix = f"{label}: " if label else ""
    rep.record(f"{prefix}{out}", record="outcome", check=label, outcome=outcome_name(out),
               detail=str(out))
    return exit_code(out)


def _combine(codes: list[int]) -> int:
    for c in (EXIT_FAILS, EXIT_UNKNOWN):
        if c in codes:
            return c
    return EXIT_HOLDS


def cmd_check(args, cfg: RunConfig, rep: Reporter) -> int:
    pc = cfg.probe_config()
    if args.kind == "entailment":
        if len(args.inputs) != 3:
            raise Malformed("entailment needs PHI PSI REALIZER")
        phi = _parse(args.inputs[0], tp.parse_predicate)
        psi = _parse(args.inputs[1], tp.parse_predicate)
        r = _parse(args.inputs[2], pca.parse)
        if phi.index != psi.index:
            raise Malformed("predicates have different index sets")
        return _report_entailment(tp.check_entailment(phi, psi, r, pc), rep, "entailment")
    if len(args.inputs) < 1:
        raise Malformed("tracking needs a document and optional morphism names")
    _, morphisms = _parse(args.inputs[0], asm.load_document)
    names = args.inputs[1:] or list(morphisms)
    if not names:
        raise Malformed("document has no morphisms", args.inputs[0])
    codes = []
    for name in names:
        if name not in morphisms:
            raise Malformed(f"unknown morphism {name}", args.inputs[0])
        codes.append(_report_entailment(asm.tracking_report(morphisms[name], pc), rep, name))
    return _combine(codes)


# -- synth ---------------------------------------------------------------------------

LAWS = {
    "identity": tp.synth_identity,
    "top": tp.synth_top,
    "bot": tp.synth_bot,
    "fst": tp.synth_fst,
    "snd": tp.synth_snd,
    "pair": lambda: tp.synth_pair(tp.synth_fst(), tp.synth_snd()),
    "inl": tp.synth_inl,
    "inr": tp.synth_inr,
    "disj-elim": lambda: tp.synth_disj_elim(tp.synth_inl(), tp.synth_inr()),
    "curry": lambda: tp.synth_curry(pca.I),
    "uncurry": lambda: tp.synth_uncurry(pca.I),
    "eval": tp.synth_eval,
    "exists-unit": lambda: tp.exists_transpose_down(pca.I),
    "exists-counit": lambda: tp.exists_transpose_up(pca.I),
    "forall-unit": lambda: tp.forall_transpose_up(pca.I),
    "forall-counit": lambda: tp.forall_transpose_down(pca.I),
    "wlem": pr.wlem_realizer,
    "de-morgan": pr.de_morgan_realizer,
    "iso": lambda: sg.ISO,
    "iso-inverse": lambda: sg.ISO_INV,
}


def cmd_synth(args, cfg: RunConfig, rep: Reporter) -> int:
    if args.what == "law":
        if len(args.inputs) != 1 or args.inputs[0] not in LAWS:
            raise Malformed("law must be one of: " + ", ".join(sorted(LAWS)))
        term = LAWS[args.inputs[0]]()
    elif args.what == "tracking":
        if len(args.inputs) != 2:
            raise Malformed("tracking needs DOCUMENT MORPHISM")
        _, morphisms = _parse(args.inputs[0], asm.load_document)
        if args.inputs[1] not in morphisms:
            raise Malformed(f"unknown morphism {args.inputs[1]}", args.inputs[0])
        m = morphisms[args.inputs[1]]
        term = asm.synth_tracking(m.source, m.target, m.fn)
    elif args.what == "bound":
        try:
            g = [int(v) for v in args.inputs]
            pr.BoundedFunction(tuple(g), tuple(g))
        except ValueError as e:
            raise Malformed(f"bound needs natural numbers: {e}") from None
        if not g:
            raise Malformed("bound needs at least one value")
        term = pr.tracking_from_bound(g)
    else:
        if len(args.inputs) != 1:
            raise Malformed("cover needs DOCUMENT:MORPHISM")
        doc, _, name = args.inputs[0].rpartition(":")
        _, morphisms = _parse(doc, asm.load_document)
        if name not in morphisms:
            raise Malformed(f"unknown morphism {name}", doc)
        term = asm.synth_cover_realizer(morphisms[name])
    _emit(pca.show(pca.canonical(term, cfg.fuel)), args.output)
    return EXIT_HOLDS


# -- assembly ------------------------------------------------------------------------


def _assembly_text(obj: asm.Assembly, name: str, maps: dict) -> str:
    """The construction, the operands it refers to, and its structure maps."""
    named = obj.renamed(name)
    operands: dict = {}
    lines = []
    for mname, m in maps.items():
        src = named if m.source is obj else m.source
        tgt = named if m.target is obj else m.target
        for a in (src, tgt):
            if a is not named:
                operands.setdefault(a.name, a)
        lines.append(asm.Morphism(src, tgt, m.fn, m.tracking, mname).to_sexpr())
    return "\n".join([a.to_sexpr() for a in operands.values()] + [named.to_sexpr()] + lines)


def cmd_assembly(args, cfg: RunConfig, rep: Reporter) -> int:
    pc = cfg.probe_config()
    objs, morphs = ({}, {}) if args.document is None else _parse(args.document,
                                                                  asm.load_document)
    names = args.operands

    def obj(i):
        try:
            return objs[names[i]]
        except (IndexError, KeyError):
            raise Malformed(f"{args.construction} needs assembly operands") from None

    def mor(i):
        try:
            return morphs[names[i]]
        except (IndexError, KeyError):
            raise Malformed(f"{args.construction} needs morphism operands") from None

    c = args.construction
    try:
        if c == "product":
            p = asm.product(obj(0), obj(1))
            text = _assembly_text(p.obj, "P", {"fst": p.fst, "snd": p.snd})
        elif c == "sum":
            s = asm.sum_(obj(0), obj(1))
            text = _assembly_text(s.obj, "S", {"inl": s.inl, "inr": s.inr})
        elif c == "equalizer":
            e = asm.equalizer(mor(0), mor(1))
            text = _assembly_text(e.obj, "E", {"incl": e.incl})
        elif c == "coequalizer":
            q = asm.coequalizer(mor(0), mor(1))
            text = _assembly_text(q.obj, "Q", {"quotient": q.quotient})
        elif c == "pullback":
            p = asm.pullback(mor(0), mor(1))
            text = _assembly_text(p.obj, "PB", {"p1": p.p1, "p2": p.p2})
        elif c == "exponential":
            e = asm.exponential(obj(0), obj(1), pc)
            text = _assembly_text(e.obj, "Exp", {"proj": e.proj})
        elif c == "factorize":
            fac = asm.factorize(mor(0))
            image = fac.super_epi.target
            text = _assembly_text(image, "Im", {"epi": fac.super_epi, "mono": fac.mono})
            text += f"\n; super epi realizer: {pca.show(fac.realizer)}"
        elif c == "cover":
            cov = asm.partitioned_cover(obj(0))
            text = _assembly_text(cov.obj, "Cover", {"proj": cov.proj})
            text += f"\n; super epi realizer: {pca.show(cov.realizer)}"
        elif c == "nabla":
            text = asm.nabla(names, "Nabla").to_sexpr()
        elif c == "terminal":
            text = asm.terminal().renamed("One").to_sexpr()
        elif c == "initial":
            text = asm.initial().renamed("Zero").to_sexpr()
        else:
            text = asm.nno(cfg.n_max).renamed("N").to_sexpr()
    except ValueError as e:
        raise Malformed(str(e)) from None
    _emit(text, args.output)
    return EXIT_HOLDS


# -- demo ----------------------------------------------------------------------------


def _demo_pretopos_sizes(sizes: str, pc: ProbeConfig) -> suites.SuiteReport:
    try:
        nx, ny = (int(v) for v in sizes.split(","))
    except ValueError:
        raise Malformed("--sizes takes two integers such as 2,2") from None
    rep = suites.SuiteReport(f"pretopos {nx},{ny}")
    rep.cases = asm.pretopos_preservation_suite(range(nx), [f"y{i}" for i in range(ny)], pc)
    return rep


def _demo_fan(path: str | None, rep: Reporter) -> int:
    text = (_read_source(path) if path
            else resources.files("herbrand").joinpath("data/fan_depth3.sexp").read_text())
    _, bars = _parse(text, pr.load_trees)
    code = EXIT_HOLDS
    for name, bar in bars.items():
        try:
            n = pr.fan_bound_extract(bar)
            rep.record(f"bar {name}: extracted bound {n}", record="bar", bar=name,
                       outcome="holds", bound=n)
        except pr.BarViolation as e:
            rep.record(f"bar {name}: rejected, path {e.path} is not in the bar", record="bar",
                       bar=name, outcome="fails", witness=e.path)
            code = EXIT_FAILS
    return code


def cmd_demo(args, cfg: RunConfig, rep: Reporter) -> int:
    pc = cfg.probe_config()
    fn = suites.DEMOS[args.name]
    code = EXIT_HOLDS
    if args.name == "fan":
        code = _demo_fan(args.file, rep)
    if args.name == "pretopos" and args.sizes:
        result = _demo_pretopos_sizes(args.sizes, pc)
    elif args.name == "nno":
        result = fn(n_max=cfg.n_max, cfg=pc)
    elif args.name in suites.SEEDED:
        result = fn(seed=args.seed, cfg=pc)
    elif args.name in suites.CONFIGURABLE:
        result = fn(cfg=pc)
    else:
        result = fn()
    for c in result.cases:
        if args.verbose or not c.ok:
            status = "pass" if c.ok else "FAIL"
            rep.record(f"  {status} {c.name}" + (f": {c.detail}" if c.detail else ""),
                       record="case", suite=result.name, case=c.name,
                       outcome="pass" if c.ok else "fail", detail=c.detail)
    rep.record(f"{result.name}: {result.passed} passed, {result.failed} failed",
               record="summary", suite=result.name, passed=result.passed, failed=result.failed)
    if result.failed:
        return EXIT_FAILS
    return code


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="herbrand", description=__doc__)
    p.add_argument("--fuel", type=int, default=pca.DEFAULT_FUEL,
                   help="evaluation step budget (default %(default)s)")
    p.add_argument("--probe-len", type=int, default=2,
                   help="longest generated probe sequence (default %(default)s)")
    p.add_argument("--nmax", type=int, default=asm.DEFAULT_NMAX,
                   help="largest natural number represented (default %(default)s)")
    p.add_argument("--format", choices=("text", "structured"), default="text",
                   help="report format (default %(default)s)")
    p.add_argument("--imp-depth", type=int, default=3,
                   help="deepest implication nesting that is probed (default %(default)s)")
    p.add_argument("--max-probes", type=int, default=128,
                   help="probe set size cap (default %(default)s)")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="normalize a term")
    e.add_argument("term", help="term text or a file holding it ('-' for stdin)")

    c = sub.add_parser("check", help="check an entailment or the trackings in a document")
    c.add_argument("kind", choices=("entailment", "tracking"))
    c.add_argument("inputs", nargs="*",
                   help="entailment: PHI PSI REALIZER; tracking: DOCUMENT [MORPHISM ...]")

    s = sub.add_parser("synth", help="emit a synthesized realizer term")
    s.add_argument("what", choices=("law", "tracking", "bound", "cover"))
    s.add_argument("inputs", nargs="*",
                   help="law: NAME; tracking: DOCUMENT MORPHISM; bound: G0 G1 ...; "
                        "cover: DOCUMENT:MORPHISM")
    s.add_argument("-o", "--output", help="file to write (default stdout)")

    a = sub.add_parser("assembly", help="build a construction from assembly files")
    a.add_argument("construction", choices=("product", "sum", "equalizer", "coequalizer",
                                            "pullback", "exponential", "factorize", "cover",
                                            "nabla", "terminal", "initial", "nno"))
    a.add_argument("operands", nargs="*",
                   help="assembly or morphism names from the document (labels for nabla)")
    a.add_argument("-d", "--document", help="file of assemblies and morphisms")
    a.add_argument("-o", "--output", help="file to write (default stdout)")

    d = sub.add_parser("demo", help="run a demonstration suite")
    d.add_argument("name", choices=sorted(suites.DEMOS))
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--sizes", help="pretopos only: carrier sizes as X,Y")
    d.add_argument("--file", help="fan only: tree and bar file (default: bundled depth-3 bar)")
    d.add_argument("-v", "--verbose", action="store_true", help="list passing cases too")
    return p


COMMANDS = {"eval": cmd_eval, "check": cmd_check, "synth": cmd_synth,
            "assembly": cmd_assembly, "demo": cmd_demo}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.fuel, args.probe_len, args.nmax, args.format, args.imp_depth,
                        args.max_probes)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    rep = Reporter(cfg.fmt)
    try:
        return COMMANDS[args.command](args, cfg, rep)
    except Malformed as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
