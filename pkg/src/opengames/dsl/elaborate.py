"""Interpret typed diagram expressions as engine values.

Elaboration is a direct homomorphism: atoms map to generator
constructors, sequential composition to `engine.compose`, and parallel
composition to `engine.tensor`. The result's boundary always equals the
inferred one.
"""

from __future__ import annotations

from ..errors import UnknownName
from .. import generators as gen
from ..engine import OpenGame, compose, identity, sym, tensor
from .ast import Atom, Par, SelRef, Seq
from .check import Env, TypedProgram, resolve_obj

_BLACK = {
    "copyF": gen.COPY_F,
    "delF": gen.DEL_F,
    "copyB": gen.COPY_B,
    "delB": gen.DEL_B,
}
_WHITE = {
    "mergeF": gen.MERGE_F,
    "spawnF": gen.SPAWN_F,
    "mergeB": gen.MERGE_B,
    "spawnB": gen.SPAWN_B,
}


def _selection(sel: SelRef, y, r):
    if sel.kind == "argmax":
        return gen.argmax_selection(y, r)
    if sel.kind == "fix":
        return gen.fix_selection(y)
    if sel.kind == "const":
        return gen.const_selection(y, r, sel.value)
    raise UnknownName(f"unknown selection {sel.kind!r}")


def elaborate_expr(expr, env: Env) -> OpenGame:
    if isinstance(expr, Seq):
        game = elaborate_expr(expr.parts[0], env)
        for part in expr.parts[1:]:
            game = compose(game, elaborate_expr(part, env))
        return game
    if isinstance(expr, Par):
        game = elaborate_expr(expr.parts[0], env)
        for part in expr.parts[1:]:
            game = tensor(game, elaborate_expr(part, env))
        return game
    if not isinstance(expr, Atom):
        raise UnknownName(f"not an expression: {expr!r}")
    kind, args = expr.kind, expr.args
    if kind == "id":
        return identity(resolve_obj(args[0], env))
    if kind == "sym":
        return sym(resolve_obj(args[0], env), resolve_obj(args[1], env))
    if kind == "counit":
        return gen.counit(env.set_named(args[0]))
    if kind == "eta":
        return gen.eta(env.set_named(args[0]))
    if kind == "liftF":
        return gen.lift_forward(env.fun_named(args[0]))
    if kind == "liftB":
        return gen.lift_backward(env.fun_named(args[0]))
    if kind in _BLACK:
        return gen.black(_BLACK[kind], env.set_named(args[0]))
    if kind in _WHITE:
        return gen.white(_WHITE[kind], env.set_named(args[0]))
    if kind == "triR":
        return gen.snake(gen.RIGHT, env.set_named(args[0]), gen.NORMAL)
    if kind == "triL":
        return gen.snake(gen.LEFT, env.set_named(args[0]), gen.NORMAL)
    if kind == "agent":
        sel, xn, yn, rn = args
        x = env.set_named(xn)
        y = env.set_named(yn)
        r = env.set_named(rn)
        return gen.agent(_selection(sel, y, r), x)
    raise UnknownName(f"unknown atom kind {kind!r}")


def elaborate(program: TypedProgram, name: str) -> OpenGame:
    """Build the named game from a typechecked program."""
    try:
        expr, _, _ = program.games[name]
    except KeyError:
        raise UnknownName(f"unknown game {name!r}")
    return elaborate_expr(expr, program.env)
