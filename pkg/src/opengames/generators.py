"""The named atomic open games: counit, agents, fixpoint units, black
copy/delete, white merge/spawn, and the snake games in built and normal
form.

Wire-order conventions (all reorderings go through `engine.sym`):
  * the fixpoint unit `eta(X)` has codomain [X+, X-];
  * `counit(X)` has domain [X+, X-];
  * black and white nodes use one wire per leg, so e.g. the forward copy
    node is [X+] -> [X+, X+].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import EmptyPayoffOrder, TypeMismatch
from .finset import (
    FiniteSet,
    FnTable,
    SubsetTable,
    UNIT,
    enumerate_functions,
    guard,
    product_all,
)
from .engine import (
    Boundary,
    I,
    OpenGame,
    backward,
    compose,
    forward,
    identity,
    make_game,
    sym,
    tensor,
    trivial_game,
)

# Node kinds, as used by the DSL and the black/white constructors.
DEL_F, COPY_F, DEL_B, COPY_B = "del+", "copy+", "del-", "copy-"
SPAWN_F, MERGE_F, SPAWN_B, MERGE_B = "spawn+", "merge+", "spawn-", "merge-"
RIGHT, LEFT = "right", "left"
BUILT, NORMAL = "built", "normal"


@dataclass(frozen=True)
class SelectionFunction:
    """A multi-valued selection: each continuation picks a subset of choices.

    `select` must be total over all tables choice_set -> payoff_set; it is
    stored as a callable and therefore total by construction.
    """

    name: str
    choice_set: FiniteSet
    payoff_set: FiniteSet
    select: Callable[[FnTable], SubsetTable]


def argmax_selection(y: FiniteSet, r: FiniteSet) -> SelectionFunction:
    """Maximizers under the payoff set's declaration order.

    Later elements of `r` rank higher. An empty payoff order is only legal
    when there is nothing to choose from.
    """
    if len(r) == 0 and len(y) > 0:
        raise EmptyPayoffOrder(
            f"argmax over empty payoff set {r.name} with nonempty choices {y.name}"
        )
    rank = {v: i for i, v in enumerate(r.elements)}

    def select(k: FnTable) -> SubsetTable:
        if len(y) == 0:
            return SubsetTable(y, ())
        best = max(rank[k(v)] for v in y.elements)
        return SubsetTable(y, tuple(v for v in y.elements if rank[k(v)] == best))

    return SelectionFunction(f"argmax[{r.name}]", y, r, select)


def fix_selection(x: FiniteSet) -> SelectionFunction:
    """The fixpoint selection: pick exactly the fixed points of k."""

    def select(k: FnTable) -> SubsetTable:
        return SubsetTable(x, tuple(v for v in x.elements if k(v) == v))

    return SelectionFunction("fix", x, x, select)


def const_selection(y: FiniteSet, r: FiniteSet, value) -> SelectionFunction:
    """Always pick one designated element, whatever the continuation says."""
    if value not in y:
        raise TypeMismatch(f"{value!r} is not in choice set {y.name}")

    def select(k: FnTable) -> SubsetTable:
        return SubsetTable(y, (value,))

    return SelectionFunction(f"const({value})", y, r, select)


def counit(x: FiniteSet) -> OpenGame:
    """The strategically trivial game [X+, X-] -> I feeding forward to back."""
    dom = forward(x) + backward(x)
    return trivial_game(dom, I, lambda v: (), lambda v, r: v, name=f"counit({x.name})")


def agent(e: SelectionFunction, x: FiniteSet) -> OpenGame:
    """A single decision [X+] -> [Y+, R-] whose rationality is `e`.

    Strategies are all tables X -> Y, encoded as image tuples in the
    declaration order of X; play applies the strategy to the observation
    and coplay is trivial. A strategy is in equilibrium when its choice
    at the observed x is selected by `e` from the continuation.
    """
    y, r = e.choice_set, e.payoff_set
    guard(len(y) ** len(x), f"strategies of agent({e.name})")
    strategies = FiniteSet(
        f"({x.name}->{y.name})",
        tuple(t.images for t in enumerate_functions(x, y)),
    )
    dom = forward(x)
    cod = forward(y) + backward(r)
    select_cache: dict = {}

    def selected(k: FnTable) -> SubsetTable:
        members = select_cache.get(k)
        if members is None:
            flat = FnTable(y, r, lambda v: k((v,))[0])
            members = e.select(flat)
            select_cache[k] = members
        return members

    def eq_fn(xv, k, sigma):
        return sigma[x.index(xv[0])] in selected(k)

    return make_game(
        dom,
        cod,
        strategies,
        lambda sigma, xv: (sigma[x.index(xv[0])],),
        lambda sigma, xv, rv: (),
        eq_fn,
        name=f"agent({e.name},{x.name})",
    )


def eta(x: FiniteSet) -> OpenGame:
    """The fixpoint unit I -> [X+, X-]: predict the value the future returns.

    Strategies are the elements of X; a strategy is in equilibrium exactly
    when the continuation maps it to itself.
    """
    cod = forward(x) + backward(x)
    return make_game(
        I,
        cod,
        x,
        lambda sigma, xv: (sigma,),
        lambda sigma, xv, rv: (),
        lambda xv, k, sigma: k((sigma,))[0] == sigma,
        name=f"eta({x.name})",
    )


def loop(x: FiniteSet) -> OpenGame:
    """The closed game eta(X) then counit(X): a prediction fed to itself."""
    return compose(eta(x), counit(x))


def lift_forward(f: FnTable) -> OpenGame:
    """The covariant lift of a function: [X+] -> [Y+]."""
    return trivial_game(
        forward(f.domain),
        forward(f.codomain),
        lambda xv: (f(xv[0]),),
        lambda xv, rv: (),
        name=f"lift+({f.domain.name}->{f.codomain.name})",
    )


def lift_backward(f: FnTable) -> OpenGame:
    """The contravariant lift of a function: [Y-] -> [X-] for f : X -> Y."""
    return trivial_game(
        backward(f.codomain),
        backward(f.domain),
        lambda xv: (),
        lambda xv, rv: (f(rv[0]),),
        name=f"lift-({f.domain.name}->{f.codomain.name})",
    )


def black(kind: str, x: FiniteSet) -> OpenGame:
    """The four black nodes: deletion and copying lifted from plain sets.

    del+ : [X+] -> I          copy+ : [X+] -> [X+, X+]
    del- : I -> [X-]          copy- : [X-, X-] -> [X-]
    """
    xp, xm = forward(x), backward(x)
    if kind == DEL_F:
        return trivial_game(xp, I, lambda v: (), lambda v, r: (), name=f"del+({x.name})")
    if kind == COPY_F:
        return trivial_game(
            xp, xp + xp, lambda v: (v[0], v[0]), lambda v, r: (), name=f"copy+({x.name})"
        )
    if kind == DEL_B:
        return trivial_game(I, xm, lambda v: (), lambda v, r: (), name=f"del-({x.name})")
    if kind == COPY_B:
        return trivial_game(
            xm + xm, xm, lambda v: (), lambda v, r: (r[0], r[0]), name=f"copy-({x.name})"
        )
    raise ValueError(f"unknown black node kind {kind!r}")


def white(kind: str, x: FiniteSet) -> OpenGame:
    """The four white nodes: spawn and merge, which match only in equilibrium.

    spawn+ : I -> [X+]        merge+ : [X+, X+] -> [X+]
    spawn- : [X-] -> I        merge- : [X-] -> [X-, X-]

    In every case the strategy set is X and the strategy passes through
    play or coplay untouched; the equilibrium set enforces agreement.
    """
    xp, xm = forward(x), backward(x)
    if kind == SPAWN_F:
        return make_game(
            I,
            xp,
            x,
            lambda s, v: (s,),
            lambda s, v, r: (),
            lambda v, k, s: True,
            name=f"spawn+({x.name})",
        )
    if kind == MERGE_F:
        return make_game(
            xp + xp,
            xp,
            x,
            lambda s, v: (s,),
            lambda s, v, r: (),
            lambda v, k, s: v[0] == v[1] and s == v[0],
            name=f"merge+({x.name})",
        )
    if kind == SPAWN_B:
        return make_game(
            xm,
            I,
            x,
            lambda s, v: (),
            lambda s, v, r: (s,),
            lambda v, k, s: True,
            name=f"spawn-({x.name})",
        )
    if kind == MERGE_B:

        def eq_fn(v, k, s):
            r1, r2 = k(())
            return r1 == r2 and s == r1

        return make_game(
            xm,
            xm + xm,
            x,
            lambda s, v: (),
            lambda s, v, r: (s,),
            eq_fn,
            name=f"merge-({x.name})",
        )
    raise ValueError(f"unknown white node kind {kind!r}")


def snake(kind: str, x: FiniteSet, form: str = NORMAL) -> OpenGame:
    """The snake games on [X+] (right) and [X-] (left).

    The built form composes eta, counit, and an explicit swap; the normal
    form is the four-line direct presentation. The two are isomorphic,
    which is a theorem checked by the law suite, not an assumption here.
    """
    xp, xm = forward(x), backward(x)
    if form == BUILT:
        if kind == RIGHT:
            return compose(
                compose(
                    tensor(identity(xp), eta(x)),
                    tensor(identity(xp), sym(xp, xm)),
                ),
                tensor(counit(x), identity(xp)),
            )
        if kind == LEFT:
            return compose(
                compose(
                    tensor(eta(x), identity(xm)),
                    tensor(identity(xp), sym(xm, xm)),
                ),
                tensor(counit(x), identity(xm)),
            )
        raise ValueError(f"unknown snake kind {kind!r}")
    if form != NORMAL:
        raise ValueError(f"unknown snake form {form!r}")
    if kind == RIGHT:
        # Play overrides the input with the strategy; only the honest
        # strategy (the one equal to the input) is in equilibrium.
        return make_game(
            xp,
            xp,
            x,
            lambda s, v: (s,),
            lambda s, v, r: (),
            lambda v, k, s: s == v[0],
            name=f"tri>({x.name})",
        )
    if kind == LEFT:
        # Coplay overrides the continuation's answer with the strategy;
        # equilibrium pins the strategy to that answer.
        return make_game(
            xm,
            xm,
            x,
            lambda s, v: (),
            lambda s, v, r: (s,),
            lambda v, k, s: s == k(())[0],
            name=f"tri<({x.name})",
        )
    raise ValueError(f"unknown snake kind {kind!r}")


def unit_intro(x: FiniteSet) -> OpenGame:
    """The invertible trivial game I -> [1+, 1-] relabelling the unit object."""
    if len(x) != 1:
        raise TypeMismatch(f"unit_intro needs a singleton carrier, got {x.name}")
    cod = forward(x) + backward(x)
    star = x.elements[0]
    return trivial_game(I, cod, lambda v: (star,), lambda v, r: (), name="unit_intro")


def pack_pair(x: FiniteSet, y: FiniteSet, paired: FiniteSet) -> OpenGame:
    """Regroup [X+, Y+, X-, Y-] into [(XxY)+, (XxY)-] as a trivial lens."""
    dom = forward(x) + forward(y) + backward(x) + backward(y)
    cod = forward(paired) + backward(paired)
    return trivial_game(
        dom,
        cod,
        lambda v: ((v[0], v[1]),),
        lambda v, r: r[0],
        name=f"pack({x.name},{y.name})",
    )
