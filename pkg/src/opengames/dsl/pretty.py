"""Canonical printer for parsed programs.

Printing normalizes whitespace, keeps declaration order, and inserts
parentheses only where the grammar requires them (a sequential chain
inside a tensor). Parsing the output reproduces the AST exactly.
"""

from __future__ import annotations

from .ast import Atom, FunDecl, GameDecl, ObjRef, Par, SelRef, Seq, SetDecl


def _arg_text(arg) -> str:
    if isinstance(arg, (ObjRef, SelRef)):
        return str(arg)
    return str(arg)


def expr_text(expr, under_par: bool = False) -> str:
    if isinstance(expr, Atom):
        return f"{expr.kind}({', '.join(_arg_text(a) for a in expr.args)})"
    if isinstance(expr, Par):
        return " * ".join(expr_text(p, under_par=True) for p in expr.parts)
    if isinstance(expr, Seq):
        body = " >> ".join(expr_text(p) for p in expr.parts)
        return f"({body})" if under_par else body
    raise ValueError(f"not an expression: {expr!r}")


def decl_text(decl) -> str:
    if isinstance(decl, SetDecl):
        return f"set {decl.name} = {{{', '.join(decl.elements)}}};"
    if isinstance(decl, FunDecl):
        pairs = ", ".join(f"{a} -> {b}" for a, b in decl.pairs)
        return f"fun {decl.name} : {decl.dom} -> {decl.cod} = {{{pairs}}};"
    if isinstance(decl, GameDecl):
        return f"game {decl.name} = {expr_text(decl.expr)};"
    raise ValueError(f"not a declaration: {decl!r}")


def program_text(decls: list) -> str:
    return "\n".join(decl_text(d) for d in decls) + "\n"
