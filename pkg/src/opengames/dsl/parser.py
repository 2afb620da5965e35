"""Lexer and recursive-descent parser for the diagram language.

Both error types carry exact (line, column) positions, 1-based; parse
errors also carry the set of token kinds that would have been accepted.

    program  := decl+
    decl     := setDecl | funDecl | gameDecl
    setDecl  := "set" ID "=" "{" ID ("," ID)* "}" ";"
    funDecl  := "fun" ID ":" ID "->" ID "=" "{" ID "->" ID ("," ID "->" ID)* "}" ";"
    gameDecl := "game" ID "=" expr ";"
    expr     := term (">>" term)*
    term     := factor ("*" factor)*
    factor   := atom | "(" expr ")"
    atom     := KIND "(" args ")"
    obj      := "[" (wire ("," wire)*)? "]"
    wire     := ID ("+" | "-")

Comments run from "#" to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import ATOM_KINDS, Atom, FunDecl, GameDecl, ObjRef, Par, SelRef, Seq, SetDecl


class LexError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


class ParseError(Exception):
    def __init__(self, msg: str, line: int, col: int, expected: frozenset = frozenset()):
        detail = f"{line}:{col}: {msg}"
        if expected:
            detail += f" (expected {', '.join(sorted(expected))})"
        super().__init__(detail)
        self.msg = msg
        self.line = line
        self.col = col
        self.expected = expected


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int


_PUNCT = {
    "{": "LBRACE",
    "}": "RBRACE",
    "(": "LPAREN",
    ")": "RPAREN",
    "[": "LBRACKET",
    "]": "RBRACKET",
    ",": "COMMA",
    ";": "SEMI",
    "=": "EQ",
    ":": "COLON",
    "+": "PLUS",
}


def _is_ident_char(c: str) -> bool:
    return c.isalnum() or c == "_"


def lex(text: str) -> list[Token]:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == ">":
            if i + 1 < n and text[i + 1] == ">":
                tokens.append(Token("SEQ", ">>", line, col))
                i += 2
                col += 2
                continue
            raise LexError("stray '>' (did you mean '>>'?)", line, col)
        if c == "-":
            if i + 1 < n and text[i + 1] == ">":
                tokens.append(Token("ARROW", "->", line, col))
                i += 2
                col += 2
                continue
            tokens.append(Token("MINUS", "-", line, col))
            i += 1
            col += 1
            continue
        if c == "*":
            tokens.append(Token("PAR", "*", line, col))
            i += 1
            col += 1
            continue
        if c in _PUNCT:
            tokens.append(Token(_PUNCT[c], c, line, col))
            i += 1
            col += 1
            continue
        if _is_ident_char(c):
            j = i
            while j < n and _is_ident_char(text[j]):
                j += 1
            tokens.append(Token("ID", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise LexError(f"unexpected character {c!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str, expected=()):
        tok = self.peek()
        raise ParseError(msg, tok.line, tok.col, frozenset(expected))

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            self.fail(f"unexpected {tok.value!r}", {kind})
        return self.next()

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    # declarations ------------------------------------------------------

    def program(self) -> list:
        decls = []
        while not self.at("EOF"):
            decls.append(self.decl())
        if not decls:
            self.fail("empty program", {"set", "fun", "game"})
        return decls

    def decl(self):
        tok = self.peek()
        if tok.kind != "ID":
            self.fail(f"unexpected {tok.value!r}", {"set", "fun", "game"})
        if tok.value == "set":
            return self.set_decl()
        if tok.value == "fun":
            return self.fun_decl()
        if tok.value == "game":
            return self.game_decl()
        self.fail(f"unknown declaration {tok.value!r}", {"set", "fun", "game"})

    def set_decl(self) -> SetDecl:
        start = self.next()
        name = self.expect("ID").value
        self.expect("EQ")
        self.expect("LBRACE")
        elements = [self.expect("ID").value]
        while self.at("COMMA"):
            self.next()
            elements.append(self.expect("ID").value)
        self.expect("RBRACE")
        self.expect("SEMI")
        return SetDecl(name, tuple(elements), (start.line, start.col))

    def fun_decl(self) -> FunDecl:
        start = self.next()
        name = self.expect("ID").value
        self.expect("COLON")
        dom = self.expect("ID").value
        self.expect("ARROW")
        cod = self.expect("ID").value
        self.expect("EQ")
        self.expect("LBRACE")
        pairs = [self._fun_pair()]
        while self.at("COMMA"):
            self.next()
            pairs.append(self._fun_pair())
        self.expect("RBRACE")
        self.expect("SEMI")
        return FunDecl(name, dom, cod, tuple(pairs), (start.line, start.col))

    def _fun_pair(self):
        a = self.expect("ID").value
        self.expect("ARROW")
        b = self.expect("ID").value
        return (a, b)

    def game_decl(self) -> GameDecl:
        start = self.next()
        name = self.expect("ID").value
        self.expect("EQ")
        expr = self.expr()
        self.expect("SEMI")
        return GameDecl(name, expr, (start.line, start.col))

    # expressions -------------------------------------------------------

    def expr(self):
        parts = [self.term()]
        while self.at("SEQ"):
            self.next()
            parts.append(self.term())
        if len(parts) == 1:
            return parts[0]
        return Seq(tuple(parts))

    def term(self):
        parts = [self.factor()]
        while self.at("PAR"):
            self.next()
            parts.append(self.factor())
        if len(parts) == 1:
            return parts[0]
        return Par(tuple(parts))

    def factor(self):
        if self.at("LPAREN"):
            self.next()
            inner = self.expr()
            self.expect("RPAREN")
            return inner
        tok = self.peek()
        if tok.kind != "ID":
            self.fail(f"unexpected {tok.value!r}", {"atom", "("})
        if tok.value not in ATOM_KINDS:
            self.fail(f"unknown atom kind {tok.value!r}", set(ATOM_KINDS))
        return self.atom()

    def atom(self) -> Atom:
        tok = self.next()
        kind = tok.value
        schema = ATOM_KINDS[kind]
        self.expect("LPAREN")
        args = []
        for slot, arg_kind in enumerate(schema):
            if slot > 0:
                self.expect("COMMA")
            if arg_kind == "obj":
                args.append(self.obj())
            elif arg_kind == "sel":
                args.append(self.sel())
            else:
                args.append(self.expect("ID").value)
        self.expect("RPAREN")
        return Atom(kind, tuple(args), (tok.line, tok.col))

    def obj(self) -> ObjRef:
        self.expect("LBRACKET")
        wires = []
        if not self.at("RBRACKET"):
            wires.append(self._wire())
            while self.at("COMMA"):
                self.next()
                wires.append(self._wire())
        self.expect("RBRACKET")
        return ObjRef(tuple(wires))

    def _wire(self):
        name = self.expect("ID").value
        tok = self.peek()
        if tok.kind == "PLUS":
            self.next()
            return (name, "+")
        if tok.kind == "MINUS":
            self.next()
            return (name, "-")
        self.fail(f"wire {name!r} needs a polarity", {"+", "-"})

    def sel(self) -> SelRef:
        tok = self.expect("ID")
        if tok.value in ("argmax", "fix"):
            return SelRef(tok.value)
        if tok.value == "const":
            self.expect("LPAREN")
            value = self.expect("ID").value
            self.expect("RPAREN")
            return SelRef("const", value)
        raise ParseError(
            f"unknown selection {tok.value!r}",
            tok.line,
            tok.col,
            frozenset({"argmax", "fix", "const"}),
        )


def parse(text: str) -> list:
    """Parse source text into a list of declarations."""
    return _Parser(lex(text)).program()
