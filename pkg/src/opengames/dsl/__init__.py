"""Textual language for polarized string diagrams.

`parse` turns source text into declarations, `typecheck` infers and
verifies every boundary, `elaborate` interprets a typed program into
engine values, and `program_text` prints a program back in canonical
form (a parse/print round trip is the identity on the AST).
"""

from .ast import Atom, FunDecl, GameDecl, ObjRef, Par, SelRef, Seq, SetDecl
from .parser import LexError, ParseError, parse
from .check import Env, TypedProgram, typecheck
from .elaborate import elaborate, elaborate_expr
from .pretty import expr_text, program_text

__all__ = [
    "Atom",
    "FunDecl",
    "GameDecl",
    "ObjRef",
    "Par",
    "SelRef",
    "Seq",
    "SetDecl",
    "LexError",
    "ParseError",
    "parse",
    "Env",
    "TypedProgram",
    "typecheck",
    "elaborate",
    "elaborate_expr",
    "expr_text",
    "program_text",
]
