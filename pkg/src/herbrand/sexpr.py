"""Minimal s-expression reader shared by all textual formats."""

from __future__ import annotations

import re

_TOKEN = re.compile(r"\s*(?:(;[^\n]*)|(\()|(\))|([^\s()]+))")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


class Symbol(str):
    """An atom token together with its source offset."""

    pos: int = -1

    def __new__(cls, text, pos=-1):
        obj = super().__new__(cls, text)
        obj.pos = pos
        return obj


class SList(list):
    pos: int = -1


def tokenize(text: str):
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                return
            raise ParseError("unreadable input", pos)
        pos = m.end()
        if m.group(1):
            continue
        if m.group(2):
            yield "(", m.start(2)
        elif m.group(3):
            yield ")", m.start(3)
        elif m.group(4):
            yield Symbol(m.group(4), m.start(4)), m.start(4)


def read_all(text: str) -> list:
    """Read every top-level form in ``text``."""
    stack: list[SList] = [SList()]
    for tok, pos in tokenize(text):
        if tok == "(" and not isinstance(tok, Symbol):
            lst = SList()
            lst.pos = pos
            stack.append(lst)
        elif tok == ")" and not isinstance(tok, Symbol):
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", pos)
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise ParseError("missing ')'", stack[-1].pos)
    return list(stack[0])


def read_one(text: str):
    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError(f"expected exactly one form, found {len(forms)}", 0)
    return forms[0]


def position(form) -> int | None:
    pos = getattr(form, "pos", -1)
    return None if pos is None or pos < 0 else pos


def head(form) -> str | None:
    if isinstance(form, list) and form and isinstance(form[0], str):
        return str(form[0])
    return None


def dump(form) -> str:
    if isinstance(form, list):
        return "(" + " ".join(dump(f) for f in form) + ")"
    return str(form)
