"""Open games over finite carriers, with exact composition semantics.

An open game is a strategy set together with play and coplay tables and a
context-indexed equilibrium predicate. Boundaries are ordered lists of
polarized wires: a wire either carries information forwards (`+`) or
backwards (`-`). A boundary value is one atom per wire of the matching
polarity, always represented as a flat tuple (so the empty boundary `I`
has the single value `()`).

Sequential composition demands exact wire-list equality between the
middle boundaries; any reordering must be written explicitly with `sym`.
Composite strategy profiles are literal ordered pairs, never flattened,
which keeps the relabelling bijections of the structural laws syntactic.

Equilibrium predicates are built compositionally and evaluated lazily,
memoized per (x, k, strategy) triple. Derived continuations (the lambda
in the composition formula) are materialized as tables and cached per
(strategy, continuation) pair. All caches are idempotent, so concurrent
evaluation is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable

from .errors import TypeMismatch
from .finset import (
    FiniteSet,
    FnTable,
    SubsetTable,
    UNIT,
    atom_label,
    enumerate_functions,
    guard,
    product,
    product_all,
)

FORWARD = "+"
BACKWARD = "-"


@dataclass(frozen=True)
class Wire:
    carrier: FiniteSet
    polarity: str

    def __post_init__(self):
        if self.polarity not in (FORWARD, BACKWARD):
            raise ValueError(f"polarity must be '+' or '-', got {self.polarity!r}")

    def __str__(self):
        return f"{self.carrier.name}{self.polarity}"


@dataclass(frozen=True)
class Boundary:
    """An ordered list of polarized wires; the empty list is the unit I."""

    wires: tuple

    def __post_init__(self):
        object.__setattr__(self, "wires", tuple(self.wires))

    def __add__(self, other: "Boundary") -> "Boundary":
        return Boundary(self.wires + other.wires)

    @cached_property
    def forward_carriers(self) -> tuple:
        return tuple(w.carrier for w in self.wires if w.polarity == FORWARD)

    @cached_property
    def backward_carriers(self) -> tuple:
        return tuple(w.carrier for w in self.wires if w.polarity == BACKWARD)

    @cached_property
    def forward_set(self) -> FiniteSet:
        return product_all(self.forward_carriers, f"fwd{self}")

    @cached_property
    def backward_set(self) -> FiniteSet:
        return product_all(self.backward_carriers, f"bwd{self}")

    @property
    def forward_arity(self) -> int:
        return len(self.forward_carriers)

    @property
    def backward_arity(self) -> int:
        return len(self.backward_carriers)

    def __str__(self):
        return "[" + ", ".join(str(w) for w in self.wires) + "]"


I = Boundary(())


def forward(s: FiniteSet) -> Boundary:
    """The covariant boundary [S+]."""
    return Boundary((Wire(s, FORWARD),))


def backward(s: FiniteSet) -> Boundary:
    """The contravariant boundary [S-]."""
    return Boundary((Wire(s, BACKWARD),))


@dataclass(frozen=True)
class Context:
    """A past observation and a future continuation for some open game."""

    x: tuple
    k: FnTable

    def __str__(self):
        ks = ", ".join(
            f"{_value_label(a)}->{_value_label(b)}" for a, b in self.k.items()
        )
        return f"(x={_value_label(self.x)}, k={{{ks}}})"


def _value_label(v: tuple) -> str:
    if len(v) == 1:
        return atom_label(v[0])
    return atom_label(v)


class OpenGame:
    """An open game: strategies, play, coplay, and an equilibrium predicate.

    `play` maps (strategy, forward dom value) pairs to forward cod values;
    `coplay` maps (strategy, forward dom value, backward cod value) triples
    to backward dom values. Both are total tables, validated at
    construction. The equilibrium predicate takes (x, k, strategy) and is
    memoized; re-evaluation always reproduces the same verdict.
    """

    __slots__ = (
        "dom",
        "cod",
        "strategies",
        "play_table",
        "coplay_table",
        "name",
        "always_true",
        "_play_map",
        "_coplay_map",
        "_eq_fn",
        "_eq_set_fn",
        "_all_strategies",
        "_eq_memo",
    )

    def __init__(
        self,
        dom: Boundary,
        cod: Boundary,
        strategies: FiniteSet,
        play_table: FnTable,
        coplay_table: FnTable,
        equilibrium: Callable,
        name: str = "",
        always_true: bool = False,
        equilibrium_set: Callable | None = None,
    ):
        fwd_dom, fwd_cod = dom.forward_set, cod.forward_set
        bwd_dom, bwd_cod = dom.backward_set, cod.backward_set
        if play_table.domain.elements != tuple(
            (s, x) for s in strategies.elements for x in fwd_dom.elements
        ):
            raise TypeMismatch(f"play table of {name or 'game'} has the wrong domain")
        if play_table.codomain != fwd_cod:
            raise TypeMismatch(f"play table of {name or 'game'} has the wrong codomain")
        if coplay_table.domain.elements != tuple(
            (s, x, r)
            for s in strategies.elements
            for x in fwd_dom.elements
            for r in bwd_cod.elements
        ):
            raise TypeMismatch(f"coplay table of {name or 'game'} has the wrong domain")
        if coplay_table.codomain != bwd_dom:
            raise TypeMismatch(
                f"coplay table of {name or 'game'} has the wrong codomain"
            )
        self.dom = dom
        self.cod = cod
        self.strategies = strategies
        self.play_table = play_table
        self.coplay_table = coplay_table
        self.name = name
        # `always_true` marks games whose equilibrium predicate is the
        # constant truth by construction (strategically trivial games and
        # composites of such); it lets composition skip the predicate.
        self.always_true = always_true
        self._play_map = dict(play_table.items())
        self._coplay_map = dict(coplay_table.items())
        self._eq_fn = equilibrium
        self._eq_set_fn = equilibrium_set
        self._all_strategies = frozenset(strategies.elements)
        self._eq_memo = {}

    def play(self, sigma, x: tuple) -> tuple:
        return self._play_map[(sigma, x)]

    def coplay(self, sigma, x: tuple, r: tuple) -> tuple:
        return self._coplay_map[(sigma, x, r)]

    def check_context(self, x: tuple, k: FnTable) -> None:
        if x not in self.dom.forward_set:
            raise TypeMismatch(
                f"{_value_label(x)} is not a forward value of {self.dom}"
            )
        fc, bc = self.cod.forward_set, self.cod.backward_set
        if (k.domain is not fc and k.domain != fc) or (
            k.codomain is not bc and k.codomain != bc
        ):
            raise TypeMismatch(
                f"continuation {k.domain.name} -> {k.codomain.name} does not "
                f"fit codomain {self.cod}"
            )

    def equilibrium_set(self, x: tuple, k: FnTable) -> frozenset:
        """The set of strategies in equilibrium in context (x, k).

        Computed once per context and memoized; writes are idempotent, so
        concurrent evaluation from several workers is safe.
        """
        if self.always_true:
            return self._all_strategies
        key = (x, k)
        memo = self._eq_memo
        hit = memo.get(key)
        if hit is None:
            self.check_context(x, k)
            if self._eq_set_fn is not None:
                hit = frozenset(self._eq_set_fn(x, k))
            else:
                fn = self._eq_fn
                hit = frozenset(
                    s for s in self.strategies.elements if fn(x, k, s)
                )
            memo[key] = hit
        return hit

    def equilibrium(self, x: tuple, k: FnTable, sigma) -> bool:
        if sigma not in self._all_strategies:
            raise TypeMismatch(f"{atom_label(sigma)} is not a strategy")
        if self.always_true:
            self.check_context(x, k)
            return True
        return sigma in self.equilibrium_set(x, k)

    def is_trivial(self) -> bool:
        """True when there is exactly one strategy profile."""
        return len(self.strategies) == 1

    def __repr__(self):
        label = self.name or "game"
        return f"<OpenGame {label} : {self.dom} -> {self.cod}, |S|={len(self.strategies)}>"


def make_game(
    dom: Boundary,
    cod: Boundary,
    strategies: FiniteSet,
    play_fn: Callable,
    coplay_fn: Callable,
    equilibrium: Callable,
    name: str = "",
    always_true: bool = False,
    equilibrium_set: Callable | None = None,
) -> OpenGame:
    """Materialize play/coplay callables into tables and build a game."""
    fwd_dom, fwd_cod = dom.forward_set, cod.forward_set
    bwd_dom, bwd_cod = dom.backward_set, cod.backward_set
    play_dom = product_all(
        [strategies, fwd_dom], name=f"dom(play {name})"
    )
    coplay_dom = product_all(
        [strategies, fwd_dom, bwd_cod], name=f"dom(coplay {name})"
    )
    guard(len(play_dom), f"play table of {name or 'game'}")
    guard(len(coplay_dom), f"coplay table of {name or 'game'}")
    play_table = FnTable(play_dom, fwd_cod, lambda sx: play_fn(sx[0], sx[1]))
    coplay_table = FnTable(
        coplay_dom, bwd_dom, lambda sxr: coplay_fn(sxr[0], sxr[1], sxr[2])
    )
    return OpenGame(
        dom,
        cod,
        strategies,
        play_table,
        coplay_table,
        equilibrium,
        name,
        always_true,
        equilibrium_set,
    )


def identity(b: Boundary) -> OpenGame:
    """The identity game on a boundary: one strategy, wires pass through."""
    return make_game(
        b,
        b,
        UNIT,
        lambda s, x: x,
        lambda s, x, r: r,
        lambda x, k, s: True,
        name=f"id{b}",
        always_true=True,
    )


def trivial_game(
    dom: Boundary, cod: Boundary, view: Callable, update: Callable, name: str = ""
) -> OpenGame:
    """A strategically trivial game from value-level view/update callables.

    `view` maps forward dom values to forward cod values; `update` maps
    (forward dom value, backward cod value) to backward dom values. The
    unique strategy is in equilibrium in every context.
    """
    return make_game(
        dom,
        cod,
        UNIT,
        lambda s, x: view(x),
        lambda s, x, r: update(x, r),
        lambda x, k, s: True,
        name=name,
        always_true=True,
    )


def from_lens(dom: Boundary, cod: Boundary, view: FnTable, update: FnTable) -> OpenGame:
    """A strategically trivial game from a lens given as two tables.

    `view` must be forward(dom) -> forward(cod) and `update` must be
    forward(dom) x backward(cod) -> backward(dom), with the pair domain
    built by `finset.product`.
    """
    if view.domain != dom.forward_set or view.codomain != cod.forward_set:
        raise TypeMismatch(f"view table does not fit {dom} -> {cod}")
    expected = product(dom.forward_set, cod.backward_set)
    if update.domain.elements != expected.elements:
        raise TypeMismatch("update table domain must be forward(dom) x backward(cod)")
    if update.codomain != dom.backward_set:
        raise TypeMismatch(f"update table does not fit {dom} -> {cod}")
    return trivial_game(
        dom, cod, lambda x: view(x), lambda x, r: update((x, r)), name="lens"
    )


def compose(g: OpenGame, h: OpenGame) -> OpenGame:
    """Sequential composite (g then h); middle boundaries must match exactly.

    The equilibrium clause follows the composition formula: the first
    factor is judged against the continuation obtained by threading the
    second factor's play and coplay through the outer continuation. That
    derived continuation is materialized as a table over the middle
    forward values and cached per (second strategy, outer continuation).
    """
    if g.cod != h.dom:
        raise TypeMismatch(
            f"cannot compose: codomain {g.cod} differs from domain {h.dom}"
        )
    mid = g.cod
    strategies = product(g.strategies, h.strategies)
    cont_cache: dict = {}
    mid_fwd = mid.forward_set
    mid_bwd = mid.backward_set

    def derived_continuation(tau, k: FnTable) -> FnTable:
        key = (tau, k)
        table = cont_cache.get(key)
        if table is None:
            table = FnTable._unchecked(
                mid_fwd,
                mid_bwd,
                tuple(
                    h.coplay(tau, y, k(h.play(tau, y))) for y in mid_fwd.elements
                ),
            )
            cont_cache[key] = table
        return table

    def play_fn(st, x):
        sigma, tau = st
        return h.play(tau, g.play(sigma, x))

    def coplay_fn(st, x, q):
        sigma, tau = st
        return g.coplay(sigma, x, h.coplay(tau, g.play(sigma, x), q))

    def eq_fn(x, k, st):
        sigma, tau = st
        return h.equilibrium(g.play(sigma, x), k, tau) and g.equilibrium(
            x, derived_continuation(tau, k), sigma
        )

    trivial = g.always_true and h.always_true

    def eq_set_fn(x, k):
        if h.always_true:
            return [
                (sigma, tau)
                for tau in h.strategies.elements
                for sigma in g.equilibrium_set(x, derived_continuation(tau, k))
            ]
        eh_at: dict = {}

        def eh(y):
            hit = eh_at.get(y)
            if hit is None:
                hit = h.equilibrium_set(y, k)
                eh_at[y] = hit
            return hit

        if g.always_true:
            return [
                (sigma, tau)
                for sigma in g.strategies.elements
                for tau in eh(g.play(sigma, x))
            ]
        pairs = []
        for tau in h.strategies.elements:
            for sigma in g.equilibrium_set(x, derived_continuation(tau, k)):
                if tau in eh(g.play(sigma, x)):
                    pairs.append((sigma, tau))
        return pairs

    return make_game(
        g.dom,
        h.cod,
        strategies,
        play_fn,
        coplay_fn,
        eq_fn,
        name=f"({g.name};{h.name})",
        always_true=trivial,
        equilibrium_set=None if trivial else eq_set_fn,
    )


def tensor(g: OpenGame, h: OpenGame) -> OpenGame:
    """Parallel composite: wire lists concatenate, components act blockwise.

    Each factor's equilibrium is judged against the continuation obtained
    by freezing the other factor's play and projecting the relevant block
    of the outer continuation's answer.
    """
    dom = g.dom + h.dom
    cod = g.cod + h.cod
    strategies = product(g.strategies, h.strategies)
    nf_dom_g = g.dom.forward_arity
    nb_cod_g = g.cod.backward_arity
    cont_cache: dict = {}

    gc_fwd, gc_bwd = g.cod.forward_set, g.cod.backward_set
    hc_fwd, hc_bwd = h.cod.forward_set, h.cod.backward_set

    def split_dom(x):
        return x[:nf_dom_g], x[nf_dom_g:]

    def left_continuation(tau, xh, k: FnTable) -> FnTable:
        key = (FORWARD, tau, xh, k)
        table = cont_cache.get(key)
        if table is None:
            frozen = h.play(tau, xh)
            table = FnTable._unchecked(
                gc_fwd,
                gc_bwd,
                tuple(k(y + frozen)[:nb_cod_g] for y in gc_fwd.elements),
            )
            cont_cache[key] = table
        return table

    def right_continuation(sigma, xg, k: FnTable) -> FnTable:
        key = (BACKWARD, sigma, xg, k)
        table = cont_cache.get(key)
        if table is None:
            frozen = g.play(sigma, xg)
            table = FnTable._unchecked(
                hc_fwd,
                hc_bwd,
                tuple(k(frozen + y)[nb_cod_g:] for y in hc_fwd.elements),
            )
            cont_cache[key] = table
        return table

    def play_fn(st, x):
        sigma, tau = st
        xg, xh = split_dom(x)
        return g.play(sigma, xg) + h.play(tau, xh)

    def coplay_fn(st, x, r):
        sigma, tau = st
        xg, xh = split_dom(x)
        return g.coplay(sigma, xg, r[:nb_cod_g]) + h.coplay(tau, xh, r[nb_cod_g:])

    def eq_fn(x, k, st):
        sigma, tau = st
        xg, xh = split_dom(x)
        return g.equilibrium(xg, left_continuation(tau, xh, k), sigma) and (
            h.equilibrium(xh, right_continuation(sigma, xg, k), tau)
        )

    trivial = g.always_true and h.always_true

    def eq_set_fn(x, k):
        xg, xh = split_dom(x)
        if g.always_true:
            return [
                (sigma, tau)
                for sigma in g.strategies.elements
                for tau in h.equilibrium_set(xh, right_continuation(sigma, xg, k))
            ]
        if h.always_true:
            return [
                (sigma, tau)
                for tau in h.strategies.elements
                for sigma in g.equilibrium_set(xg, left_continuation(tau, xh, k))
            ]
        eg_at = {
            tau: g.equilibrium_set(xg, left_continuation(tau, xh, k))
            for tau in h.strategies.elements
        }
        pairs = []
        for sigma in g.strategies.elements:
            eh = h.equilibrium_set(xh, right_continuation(sigma, xg, k))
            pairs.extend(
                (sigma, tau) for tau in eh if sigma in eg_at[tau]
            )
        return pairs

    return make_game(
        dom,
        cod,
        strategies,
        play_fn,
        coplay_fn,
        eq_fn,
        name=f"({g.name}|{h.name})",
        always_true=trivial,
        equilibrium_set=None if trivial else eq_set_fn,
    )


def sym(a: Boundary, b: Boundary) -> OpenGame:
    """The strategically trivial block swap a ++ b -> b ++ a."""
    dom = a + b
    cod = b + a
    nfa, nfb = a.forward_arity, b.forward_arity
    nba, nbb = a.backward_arity, b.backward_arity

    def view(x):
        return x[nfa:] + x[:nfa]

    def update(x, r):
        return r[nbb:] + r[:nbb]

    return trivial_game(dom, cod, view, update, name=f"sym({a},{b})")


def count_contexts(g: OpenGame) -> int:
    fwd = len(g.dom.forward_set)
    return fwd * (len(g.cod.backward_set) ** len(g.cod.forward_set))


def all_contexts(g: OpenGame) -> list[Context]:
    """Every context for g, in deterministic (x-major, then k) order."""
    guard(count_contexts(g), f"contexts of {g.name or 'game'}")
    ks = enumerate_functions(g.cod.forward_set, g.cod.backward_set)
    return [Context(x, k) for x in g.dom.forward_set.elements for k in ks]


def nash(g: OpenGame, ctx: Context) -> SubsetTable:
    """The strategies of g in equilibrium in the given context."""
    g.check_context(ctx.x, ctx.k)
    eqs = g.equilibrium_set(ctx.x, ctx.k)
    members = tuple(s for s in g.strategies.elements if s in eqs)
    return SubsetTable(g.strategies, members)


def the_context(g: OpenGame) -> Context:
    """The unique context of a game whose context space is a singleton."""
    ctxs = all_contexts(g)
    if len(ctxs) != 1:
        raise TypeMismatch(
            f"{g.name or 'game'} has {len(ctxs)} contexts, not exactly one"
        )
    return ctxs[0]
