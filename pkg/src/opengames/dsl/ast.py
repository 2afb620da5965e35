"""AST for the diagram language.

Sequential and parallel composition are kept n-ary and flattened, so
`a >> b >> c` is a single three-part node; redundant source parentheses
do not survive parsing. Source positions ride along for diagnostics but
are ignored by structural equality, which is what the print/parse
round-trip law compares.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class ObjRef:
    """A boundary literal: named wires with polarities, e.g. [B+, C-]."""

    wires: tuple  # of (set name, "+" | "-")

    def __str__(self):
        return "[" + ", ".join(f"{n}{p}" for n, p in self.wires) + "]"


@dataclass(frozen=True)
class SelRef:
    """A built-in selection: argmax, fix, or const(element)."""

    kind: str
    value: str | None = None

    def __str__(self):
        return f"const({self.value})" if self.kind == "const" else self.kind


@dataclass(frozen=True)
class Atom:
    kind: str
    args: tuple
    pos: tuple | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Seq:
    parts: tuple
    pos: tuple | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Par:
    parts: tuple
    pos: tuple | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SetDecl:
    name: str
    elements: tuple
    pos: tuple | None = field(default=None, compare=False)


@dataclass(frozen=True)
class FunDecl:
    name: str
    dom: str
    cod: str
    pairs: tuple  # of (element, element)
    pos: tuple | None = field(default=None, compare=False)


@dataclass(frozen=True)
class GameDecl:
    name: str
    expr: object
    pos: tuple | None = field(default=None, compare=False)


# Argument schema per atom kind: obj literals, set names, fun names, or
# selection references. The parser and the typechecker both key off this.
ATOM_KINDS = {
    "id": ("obj",),
    "sym": ("obj", "obj"),
    "counit": ("set",),
    "eta": ("set",),
    "liftF": ("fun",),
    "liftB": ("fun",),
    "copyF": ("set",),
    "delF": ("set",),
    "copyB": ("set",),
    "delB": ("set",),
    "mergeF": ("set",),
    "spawnF": ("set",),
    "mergeB": ("set",),
    "spawnB": ("set",),
    "triR": ("set",),
    "triL": ("set",),
    "agent": ("sel", "set", "set", "set"),
}
