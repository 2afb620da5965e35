"""Deterministic enumeration of diagram terms over a single carrier.

The morphism and behaviour searches draw their candidates from this
grammar rather than from raw game tables: terms are the universe the
negative results quantify over, and they stay reportable as text.

A term is an atom (one generator) or an n-ary chain of previously built
terms under sequential or parallel composition. The depth of an atom is
0 and the depth of a chain is one more than its deepest element, so
chains of any length cost one level. Enumeration order is fixed by
construction and never depends on hashing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from . import generators as gen
from .engine import Boundary, OpenGame, all_contexts, backward, compose, forward, identity, sym, tensor
from .errors import SizeGuardExceeded
from .finset import FiniteSet, FnTable, enumerate_functions


@dataclass(frozen=True)
class Term:
    """A diagram term: op is an atom kind, "seq", or "par"."""

    op: str
    args: tuple = ()

    @cached_property
    def depth(self) -> int:
        if self.op in ("seq", "par"):
            return 1 + max(t.depth for t in self.args)
        return 0

    def __str__(self):
        return term_text(self)


def term_text(term: Term) -> str:
    """Render a term in the diagram language's concrete syntax."""
    if term.op == "seq":
        return " >> ".join(
            f"({term_text(t)})" if t.op == "seq" else term_text(t)
            for t in term.args
        )
    if term.op == "par":
        return " * ".join(
            f"({term_text(t)})" if t.op in ("seq", "par") else term_text(t)
            for t in term.args
        )
    if term.op == "id":
        return f"id({term.args[0]})"
    if term.op == "sym":
        return f"sym({term.args[0]}, {term.args[1]})"
    if term.op in ("liftF", "liftB"):
        fn: FnTable = term.args[0]
        body = ",".join(f"{a}>{b}" for a, b in fn.items())
        return f"{term.op}{{{body}}}"
    if term.op == "agent":
        sel: gen.SelectionFunction = term.args[0]
        return f"agent({sel.name}, {term.args[1].name})"
    return f"{term.op}({term.args[0].name})"


_BOUNDARY_CACHE: dict = {}


def term_boundary(term: Term) -> tuple:
    """(dom, cod) of a term, computed without building the game."""
    hit = _BOUNDARY_CACHE.get(term)
    if hit is not None:
        return hit
    if term.op == "seq":
        dom, cod = term_boundary(term.args[0])
        for part in term.args[1:]:
            pdom, pcod = term_boundary(part)
            assert cod == pdom, "seq chain is not composable"
            cod = pcod
        result = (dom, cod)
    elif term.op == "par":
        dom, cod = term_boundary(term.args[0])
        for part in term.args[1:]:
            pdom, pcod = term_boundary(part)
            dom, cod = dom + pdom, cod + pcod
        result = (dom, cod)
    else:
        result = _ATOM_BOUNDARY[term]
    _BOUNDARY_CACHE[term] = result
    return result


def term_sigma_size(term: Term) -> int:
    if term.op in ("seq", "par"):
        n = 1
        for part in term.args:
            n *= term_sigma_size(part)
        return n
    return _ATOM_SIGMA[term]


def build(term: Term) -> OpenGame:
    if term.op == "seq":
        game = build(term.args[0])
        for part in term.args[1:]:
            game = compose(game, build(part))
        return game
    if term.op == "par":
        game = build(term.args[0])
        for part in term.args[1:]:
            game = tensor(game, build(part))
        return game
    return _ATOM_BUILD[term.op](*term.args)


_ATOM_BUILD = {
    "id": identity,
    "sym": sym,
    "eta": gen.eta,
    "counit": gen.counit,
    "triR": lambda s: gen.snake(gen.RIGHT, s, gen.NORMAL),
    "triL": lambda s: gen.snake(gen.LEFT, s, gen.NORMAL),
    "liftF": gen.lift_forward,
    "liftB": gen.lift_backward,
    "copyF": lambda s: gen.black(gen.COPY_F, s),
    "delF": lambda s: gen.black(gen.DEL_F, s),
    "copyB": lambda s: gen.black(gen.COPY_B, s),
    "delB": lambda s: gen.black(gen.DEL_B, s),
    "mergeF": lambda s: gen.white(gen.MERGE_F, s),
    "spawnF": lambda s: gen.white(gen.SPAWN_F, s),
    "mergeB": lambda s: gen.white(gen.MERGE_B, s),
    "spawnB": lambda s: gen.white(gen.SPAWN_B, s),
    "agent": gen.agent,
}

_ATOM_BOUNDARY: dict = {}
_ATOM_SIGMA: dict = {}


def atoms(carrier: FiniteSet, with_agents: bool = True) -> list[Term]:
    """Every atomic generator over one carrier, in a fixed order.

    Lifts range over all endofunctions of the carrier; agents use the
    argmax and fixpoint selections with the carrier as both choice and
    payoff set.
    """
    s = carrier
    fp, bp = forward(s), backward(s)
    out = [
        Term("id", (fp,)),
        Term("id", (bp,)),
        Term("eta", (s,)),
        Term("counit", (s,)),
        Term("triR", (s,)),
        Term("triL", (s,)),
        Term("copyF", (s,)),
        Term("delF", (s,)),
        Term("copyB", (s,)),
        Term("delB", (s,)),
        Term("mergeF", (s,)),
        Term("spawnF", (s,)),
        Term("mergeB", (s,)),
        Term("spawnB", (s,)),
        Term("sym", (fp, fp)),
        Term("sym", (fp, bp)),
        Term("sym", (bp, fp)),
        Term("sym", (bp, bp)),
    ]
    for fn in enumerate_functions(s, s):
        out.append(Term("liftF", (fn,)))
        out.append(Term("liftB", (fn,)))
    if with_agents:
        out.append(Term("agent", (gen.argmax_selection(s, s), s)))
        out.append(Term("agent", (gen.fix_selection(s), s)))
    for term in out:
        if term not in _ATOM_BOUNDARY:
            game_free = term.op
            if game_free == "id":
                b = term.args[0]
                _ATOM_BOUNDARY[term] = (b, b)
                _ATOM_SIGMA[term] = 1
            elif game_free == "sym":
                a, b = term.args
                _ATOM_BOUNDARY[term] = (a + b, b + a)
                _ATOM_SIGMA[term] = 1
            elif game_free == "eta":
                _ATOM_BOUNDARY[term] = (Boundary(()), fp + bp)
                _ATOM_SIGMA[term] = len(s)
            elif game_free == "counit":
                _ATOM_BOUNDARY[term] = (fp + bp, Boundary(()))
                _ATOM_SIGMA[term] = 1
            elif game_free in ("triR",):
                _ATOM_BOUNDARY[term] = (fp, fp)
                _ATOM_SIGMA[term] = len(s)
            elif game_free in ("triL",):
                _ATOM_BOUNDARY[term] = (bp, bp)
                _ATOM_SIGMA[term] = len(s)
            elif game_free == "liftF":
                _ATOM_BOUNDARY[term] = (fp, fp)
                _ATOM_SIGMA[term] = 1
            elif game_free == "liftB":
                _ATOM_BOUNDARY[term] = (bp, bp)
                _ATOM_SIGMA[term] = 1
            elif game_free == "copyF":
                _ATOM_BOUNDARY[term] = (fp, fp + fp)
                _ATOM_SIGMA[term] = 1
            elif game_free == "delF":
                _ATOM_BOUNDARY[term] = (fp, Boundary(()))
                _ATOM_SIGMA[term] = 1
            elif game_free == "copyB":
                _ATOM_BOUNDARY[term] = (bp + bp, bp)
                _ATOM_SIGMA[term] = 1
            elif game_free == "delB":
                _ATOM_BOUNDARY[term] = (Boundary(()), bp)
                _ATOM_SIGMA[term] = 1
            elif game_free == "mergeF":
                _ATOM_BOUNDARY[term] = (fp + fp, fp)
                _ATOM_SIGMA[term] = len(s)
            elif game_free == "spawnF":
                _ATOM_BOUNDARY[term] = (Boundary(()), fp)
                _ATOM_SIGMA[term] = len(s)
            elif game_free == "mergeB":
                _ATOM_BOUNDARY[term] = (bp, bp + bp)
                _ATOM_SIGMA[term] = len(s)
            elif game_free == "spawnB":
                _ATOM_BOUNDARY[term] = (bp, Boundary(()))
                _ATOM_SIGMA[term] = len(s)
            elif game_free == "agent":
                sel = term.args[0]
                _ATOM_BOUNDARY[term] = (
                    forward(term.args[1]),
                    forward(sel.choice_set) + backward(sel.payoff_set),
                )
                _ATOM_SIGMA[term] = len(sel.choice_set) ** len(term.args[1])
    return out


@dataclass(frozen=True)
class PoolLimits:
    """Caps that keep the enumerated term pool desk-sized.

    The caps are part of the definition of the searched space: an
    exhaustion report is exhaustion of the space these limits carve out.
    """

    max_wires: int = 3
    max_sigma: int = 4
    max_contexts: int = 48
    max_chain: int = 3
    max_pool: int = 20000


@dataclass(frozen=True)
class PoolEntry:
    term: Term
    game: OpenGame


def _admissible(term: Term, limits: PoolLimits) -> bool:
    dom, cod = term_boundary(term)
    if len(dom.wires) > limits.max_wires or len(cod.wires) > limits.max_wires:
        return False
    if term_sigma_size(term) > limits.max_sigma:
        return False
    n_ctx = len(dom.forward_set) * (
        len(cod.backward_set) ** len(cod.forward_set)
    )
    return n_ctx <= limits.max_contexts


def _fingerprint(game: OpenGame):
    """Semantic identity up to strategy labels: tables plus the full
    equilibrium bitmap over all contexts, in enumeration order."""
    eq_bits = []
    for ctx in all_contexts(game):
        eqs = game.equilibrium_set(ctx.x, ctx.k)
        eq_bits.append(
            tuple(s in eqs for s in game.strategies.elements)
        )
    return (
        str(game.dom),
        str(game.cod),
        len(game.strategies),
        game.play_table.images,
        game.coplay_table.images,
        tuple(eq_bits),
    )


def _par_chains(terms: list[Term], limits: PoolLimits):
    """Parallel chains of 2..max_chain factors within the wire budget,
    in lexicographic factor order."""
    info = [
        (t, term_boundary(t), term_sigma_size(t))
        for t in terms
    ]
    out = []

    def extend(parts, dw, cw, sigma):
        if len(parts) >= 2:
            out.append(Term("par", tuple(parts)))
        if len(parts) >= limits.max_chain:
            return
        for t, (dom, cod), sz in info:
            ndw = dw + len(dom.wires)
            ncw = cw + len(cod.wires)
            nsigma = sigma * sz
            if ndw > limits.max_wires or ncw > limits.max_wires:
                continue
            if nsigma > limits.max_sigma:
                continue
            extend(parts + [t], ndw, ncw, nsigma)

    for t, (dom, cod), sz in info:
        if len(dom.wires) <= limits.max_wires and len(cod.wires) <= limits.max_wires:
            extend([t], len(dom.wires), len(cod.wires), sz)
    return out


def _seq_chains(terms: list[Term], limits: PoolLimits):
    """Composable sequential chains of 2..max_chain stages, ordered by
    chain length then by stage indices."""
    info = [(t, term_boundary(t), term_sigma_size(t)) for t in terms]
    by_dom: dict = {}
    for t, (dom, cod), sz in info:
        by_dom.setdefault(dom, []).append((t, cod, sz))
    out = []
    frontier = [((t,), dom, cod, sz) for t, (dom, cod), sz in info]
    for _ in range(2, limits.max_chain + 1):
        extended = []
        for parts, dom, cod, sigma in frontier:
            for nxt, ncod, nsz in by_dom.get(cod, ()):
                nsigma = sigma * nsz
                if nsigma > limits.max_sigma:
                    continue
                nparts = parts + (nxt,)
                out.append(Term("seq", nparts))
                extended.append((nparts, dom, ncod, nsigma))
        frontier = extended
    return out


def enumerate_pool(
    carrier: FiniteSet,
    depth: int,
    limits: PoolLimits = PoolLimits(),
    with_agents: bool = True,
) -> list[PoolEntry]:
    """Terms of at most the given depth, deduplicated semantically.

    Level 1 adds parallel chains of atoms, level 2 sequential chains of
    everything so far, level 3 parallel chains again, and so on,
    alternating. Each level builds on the deduplicated pool of the
    previous ones: two terms whose games have identical boundaries,
    tables, and equilibrium bitmaps (up to strategy labels) are kept
    once, first occurrence winning. Terms violating the limits are
    skipped; the pool is truncated at max_pool entries.
    """
    pool: list[PoolEntry] = []
    seen: set = set()

    def admit(term: Term) -> None:
        if len(pool) >= limits.max_pool:
            return
        try:
            game = build(term)
            fp = _fingerprint(game)
        except SizeGuardExceeded:
            return
        if fp in seen:
            return
        seen.add(fp)
        pool.append(PoolEntry(term, game))

    for t in atoms(carrier, with_agents):
        if _admissible(t, limits):
            admit(t)
    for level in range(1, depth + 1):
        snapshot = [e.term for e in pool]
        chains = (
            _par_chains(snapshot, limits)
            if level % 2 == 1
            else _seq_chains(snapshot, limits)
        )
        for term in chains:
            if _admissible(term, limits):
                admit(term)
    return pool


def sample_entries(pool: list[PoolEntry], n: int, seed: int) -> list[PoolEntry]:
    """Deterministic sample (with replacement) from an enumerated pool."""
    import random

    rng = random.Random(seed)
    return [pool[rng.randrange(len(pool))] for _ in range(n)]


def composable_pairs(pool: list[PoolEntry]):
    """All (left, right) pool pairs with matching middle boundary."""
    by_dom: dict = {}
    for entry in pool:
        by_dom.setdefault(entry.game.dom, []).append(entry)
    for left in pool:
        for right in by_dom.get(left.game.cod, ()):
            yield left, right
