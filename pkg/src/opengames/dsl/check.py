"""Boundary inference and checking for parsed programs.

Sequential junctions demand exact wire-list equality; the error message
names both boundaries and the junction that failed. Declarations are
processed in order and must precede their uses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import TypeMismatch, UnknownName
from ..finset import FiniteSet, FnTable
from ..engine import BACKWARD, Boundary, FORWARD, Wire
from .ast import Atom, FunDecl, GameDecl, ObjRef, Par, SelRef, Seq, SetDecl


@dataclass
class Env:
    sets: dict = field(default_factory=dict)
    funs: dict = field(default_factory=dict)

    def set_named(self, name: str) -> FiniteSet:
        try:
            return self.sets[name]
        except KeyError:
            raise UnknownName(f"unknown set {name!r}")

    def fun_named(self, name: str) -> FnTable:
        try:
            return self.funs[name]
        except KeyError:
            raise UnknownName(f"unknown function {name!r}")


@dataclass
class TypedProgram:
    decls: list
    env: Env
    games: dict  # name -> (expr, dom Boundary, cod Boundary)

    def boundary(self, name: str):
        try:
            _, dom, cod = self.games[name]
            return dom, cod
        except KeyError:
            raise UnknownName(f"unknown game {name!r}")


def _at(pos) -> str:
    return f" at {pos[0]}:{pos[1]}" if pos else ""


def resolve_obj(obj: ObjRef, env: Env) -> Boundary:
    return Boundary(
        tuple(
            Wire(env.set_named(name), FORWARD if pol == "+" else BACKWARD)
            for name, pol in obj.wires
        )
    )


def atom_boundary(atom: Atom, env: Env) -> tuple:
    """The (dom, cod) wire lists of a single generator."""
    kind, args = atom.kind, atom.args
    if kind == "id":
        b = resolve_obj(args[0], env)
        return b, b
    if kind == "sym":
        a, b = resolve_obj(args[0], env), resolve_obj(args[1], env)
        return a + b, b + a
    s = (
        env.set_named(args[0])
        if ATOM_SET_ARG.get(kind) == 0
        else None
    )
    if kind == "counit":
        return _fwd(s) + _bwd(s), Boundary(())
    if kind == "eta":
        return Boundary(()), _fwd(s) + _bwd(s)
    if kind == "liftF":
        f = env.fun_named(args[0])
        return _fwd(f.domain), _fwd(f.codomain)
    if kind == "liftB":
        f = env.fun_named(args[0])
        return _bwd(f.codomain), _bwd(f.domain)
    if kind == "copyF":
        return _fwd(s), _fwd(s) + _fwd(s)
    if kind == "delF":
        return _fwd(s), Boundary(())
    if kind == "copyB":
        return _bwd(s) + _bwd(s), _bwd(s)
    if kind == "delB":
        return Boundary(()), _bwd(s)
    if kind == "mergeF":
        return _fwd(s) + _fwd(s), _fwd(s)
    if kind == "spawnF":
        return Boundary(()), _fwd(s)
    if kind == "mergeB":
        return _bwd(s), _bwd(s) + _bwd(s)
    if kind == "spawnB":
        return _bwd(s), Boundary(())
    if kind == "triR":
        return _fwd(s), _fwd(s)
    if kind == "triL":
        return _bwd(s), _bwd(s)
    if kind == "agent":
        sel, xn, yn, rn = args
        x, y, r = env.set_named(xn), env.set_named(yn), env.set_named(rn)
        _check_selection(sel, y, r, atom.pos)
        return _fwd(x), _fwd(y) + _bwd(r)
    raise UnknownName(f"unknown atom kind {kind!r}")


ATOM_SET_ARG = {
    kind: 0
    for kind in (
        "counit",
        "eta",
        "copyF",
        "delF",
        "copyB",
        "delB",
        "mergeF",
        "spawnF",
        "mergeB",
        "spawnB",
        "triR",
        "triL",
    )
}


def _fwd(s: FiniteSet) -> Boundary:
    return Boundary((Wire(s, FORWARD),))


def _bwd(s: FiniteSet) -> Boundary:
    return Boundary((Wire(s, BACKWARD),))


def _check_selection(sel: SelRef, y: FiniteSet, r: FiniteSet, pos) -> None:
    if sel.kind == "fix" and y != r:
        raise TypeMismatch(
            f"fix needs matching choice and payoff sets, got {y.name} and "
            f"{r.name}{_at(pos)}"
        )
    if sel.kind == "const" and sel.value not in y:
        raise TypeMismatch(
            f"const element {sel.value!r} is not in choice set {y.name}{_at(pos)}"
        )
    if sel.kind == "argmax" and len(r) == 0 and len(y) > 0:
        raise TypeMismatch(
            f"argmax needs a nonempty payoff set for choices {y.name}{_at(pos)}"
        )


def infer(expr, env: Env) -> tuple:
    """Infer (dom, cod) of an expression, checking every junction."""
    if isinstance(expr, Atom):
        return atom_boundary(expr, env)
    if isinstance(expr, Seq):
        dom, cod = infer(expr.parts[0], env)
        for i, part in enumerate(expr.parts[1:], start=2):
            pdom, pcod = infer(part, env)
            if cod != pdom:
                raise TypeMismatch(
                    f"sequential junction {i - 1} does not match: left gives "
                    f"{cod}, right needs {pdom}{_at(getattr(part, 'pos', None))}"
                )
            cod = pcod
        return dom, cod
    if isinstance(expr, Par):
        dom, cod = infer(expr.parts[0], env)
        for part in expr.parts[1:]:
            pdom, pcod = infer(part, env)
            dom, cod = dom + pdom, cod + pcod
        return dom, cod
    raise TypeMismatch(f"not an expression: {expr!r}")


def typecheck(decls: list) -> TypedProgram:
    """Build the environment and annotate every game with its boundary."""
    env = Env()
    games: dict = {}
    for decl in decls:
        if isinstance(decl, SetDecl):
            if decl.name in env.sets:
                raise TypeMismatch(f"duplicate set {decl.name!r}{_at(decl.pos)}")
            env.sets[decl.name] = FiniteSet(decl.name, decl.elements)
        elif isinstance(decl, FunDecl):
            if decl.name in env.funs:
                raise TypeMismatch(f"duplicate function {decl.name!r}{_at(decl.pos)}")
            dom = env.set_named(decl.dom)
            cod = env.set_named(decl.cod)
            mapping: dict = {}
            for a, b in decl.pairs:
                if a not in dom:
                    raise TypeMismatch(
                        f"function {decl.name!r}: {a!r} is not in {dom.name}"
                        f"{_at(decl.pos)}"
                    )
                if b not in cod:
                    raise TypeMismatch(
                        f"function {decl.name!r}: {b!r} is not in {cod.name}"
                        f"{_at(decl.pos)}"
                    )
                if a in mapping:
                    raise TypeMismatch(
                        f"function {decl.name!r} maps {a!r} twice{_at(decl.pos)}"
                    )
                mapping[a] = b
            if len(mapping) != len(dom):
                missing = [x for x in dom.elements if x not in mapping]
                raise TypeMismatch(
                    f"function {decl.name!r} is not total; missing {missing}"
                    f"{_at(decl.pos)}"
                )
            env.funs[decl.name] = FnTable(dom, cod, mapping)
        elif isinstance(decl, GameDecl):
            if decl.name in games:
                raise TypeMismatch(f"duplicate game {decl.name!r}{_at(decl.pos)}")
            dom, cod = infer(decl.expr, env)
            games[decl.name] = (decl.expr, dom, cod)
        else:
            raise TypeMismatch(f"unknown declaration {decl!r}")
    return TypedProgram(decls, env, games)
