"""Morphisms between open games: verification, exhaustive search, and the
equilibrium-behaviour relation.

A morphism is a strategy-profile map that preserves play, coplay, and
equilibria. Non-existence results returned by the search functions are
proofs at the instance: the candidate space is enumerated completely
(pruned only by the play/coplay conditions, which every morphism must
satisfy pointwise), never sampled.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial, prod

from .errors import TypeMismatch
from .finset import FnTable, atom_label, guard
from .engine import Context, OpenGame, all_contexts


@dataclass(frozen=True)
class Verdict:
    """Outcome of running the three morphism conditions."""

    ok: bool
    condition: str | None = None
    counterexample: tuple | None = None
    checks: int = 0
    vacuous: bool = False

    def describe(self) -> str:
        if self.ok:
            return "vacuous" if self.vacuous else "pass"
        parts = ", ".join(atom_label(c) for c in self.counterexample)
        return f"fail[{self.condition}] at ({parts})"


@dataclass(frozen=True)
class GameMorphism:
    """A candidate 2-cell together with its checked verdict."""

    source: OpenGame
    target: OpenGame
    alpha: FnTable
    verdict: Verdict


@dataclass(frozen=True)
class Iso:
    forward: GameMorphism
    backward: GameMorphism

    @property
    def ok(self) -> bool:
        return self.forward.verdict.ok and self.backward.verdict.ok


@dataclass(frozen=True)
class SimWitness:
    """One matched pair of equilibria under the behaviour relation."""

    context: Context
    left: object
    right: object
    matched_play: tuple
    matched_coplay: tuple


@dataclass
class SimVerdict:
    ok: bool
    witnesses: list = field(default_factory=list)
    failure: tuple | None = None  # (context, side, unmatched strategy)
    contexts_checked: int = 0
    vacuous: bool = False

    def describe(self) -> str:
        if self.ok:
            return "vacuous" if self.vacuous else "pass"
        ctx, side, sigma = self.failure
        return f"fail: {side} strategy {atom_label(sigma)} unmatched in {ctx}"


def _require_globular(g: OpenGame, h: OpenGame) -> None:
    if g.dom != h.dom or g.cod != h.cod:
        raise TypeMismatch(
            f"games are not globular: {g.dom} -> {g.cod} vs {h.dom} -> {h.cod}"
        )


def check_morphism(source: OpenGame, target: OpenGame, alpha: FnTable) -> GameMorphism:
    """Run the three morphism conditions, stopping at the first violation.

    The verdict carries the violated condition name and a concrete
    counterexample triple, so failures are reproducible by re-running.
    """
    _require_globular(source, target)
    if alpha.domain != source.strategies or alpha.codomain != target.strategies:
        raise TypeMismatch("alpha must map source strategies to target strategies")
    checks = 0
    for sigma in source.strategies.elements:
        image = alpha(sigma)
        for x in source.dom.forward_set.elements:
            checks += 1
            if source.play(sigma, x) != target.play(image, x):
                return GameMorphism(
                    source,
                    target,
                    alpha,
                    Verdict(False, "play", (sigma, x), checks),
                )
    for sigma in source.strategies.elements:
        image = alpha(sigma)
        for x in source.dom.forward_set.elements:
            for r in source.cod.backward_set.elements:
                checks += 1
                if source.coplay(sigma, x, r) != target.coplay(image, x, r):
                    return GameMorphism(
                        source,
                        target,
                        alpha,
                        Verdict(False, "coplay", (sigma, x, r), checks),
                    )
    for ctx in all_contexts(source):
        eq_s = source.equilibrium_set(ctx.x, ctx.k)
        eq_t = target.equilibrium_set(ctx.x, ctx.k)
        for sigma in source.strategies.elements:
            checks += 1
            if sigma in eq_s and alpha(sigma) not in eq_t:
                return GameMorphism(
                    source,
                    target,
                    alpha,
                    Verdict(False, "equilibrium", (sigma, ctx.x, ctx.k), checks),
                )
    return GameMorphism(
        source, target, alpha, Verdict(True, checks=checks, vacuous=checks == 0)
    )


def _behaviour_rows(g: OpenGame) -> dict:
    """Per-strategy (play row, coplay row); equal rows are a necessary
    condition for one strategy to map to the other under any morphism."""
    xs = g.dom.forward_set.elements
    rs = g.cod.backward_set.elements
    rows = {}
    for sigma in g.strategies.elements:
        play_row = tuple(g.play(sigma, x) for x in xs)
        coplay_row = tuple(g.coplay(sigma, x, r) for x in xs for r in rs)
        rows[sigma] = (play_row, coplay_row)
    return rows


def _equilibrium_tables(g: OpenGame, h: OpenGame, contexts):
    eg = []
    eh = []
    for ctx in contexts:
        eqs = g.equilibrium_set(ctx.x, ctx.k)
        eg.append([i for i, s in enumerate(g.strategies.elements) if s in eqs])
        eh.append(h.equilibrium_set(ctx.x, ctx.k))
    return eg, eh


def find_morphisms(g: OpenGame, h: OpenGame) -> list[GameMorphism]:
    """Every morphism g => h, in the lexicographic order of image tuples.

    An empty result is a complete-enumeration proof that no morphism
    exists at this instance. Candidates violating the play or coplay
    condition at any strategy are pruned up front; the remainder is
    enumerated exhaustively and filtered by the equilibrium condition.
    """
    _require_globular(g, h)
    rows_g = _behaviour_rows(g)
    rows_h = _behaviour_rows(h)
    by_row: dict = {}
    for tau in h.strategies.elements:
        by_row.setdefault(rows_h[tau], []).append(tau)
    cands = [by_row.get(rows_g[s], []) for s in g.strategies.elements]
    if any(not c for c in cands):
        return []
    guard(prod(len(c) for c in cands), "morphism candidates")
    contexts = all_contexts(g)
    eg, eh = _equilibrium_tables(g, h, contexts)
    sigma_elems = g.strategies.elements
    found = []
    for images in itertools.product(*cands):
        if all(
            all(images[i] in eh_c for i in eg_c) for eg_c, eh_c in zip(eg, eh)
        ):
            alpha = FnTable(g.strategies, h.strategies, images)
            checks = len(contexts) * len(sigma_elems)
            found.append(
                GameMorphism(
                    g, h, alpha, Verdict(True, checks=checks, vacuous=checks == 0)
                )
            )
    return found


def check_iso(g: OpenGame, h: OpenGame, alpha: FnTable) -> Iso:
    """Check that alpha is a bijection and a morphism in both directions."""
    _require_globular(g, h)
    if len(set(alpha.images)) != len(alpha.images) or len(alpha.domain) != len(
        alpha.codomain
    ):
        raise TypeMismatch("alpha is not a bijection of strategy sets")
    inverse = FnTable(
        h.strategies,
        g.strategies,
        {y: x for x, y in alpha.items()},
    )
    return Iso(check_morphism(g, h, alpha), check_morphism(h, g, inverse))


def find_iso(g: OpenGame, h: OpenGame) -> Iso | None:
    """Search for an isomorphism; None is a completed-search negative.

    Candidate bijections must match play/coplay behaviour rows pointwise,
    so the search runs over row-preserving bijections only (all others
    provably fail). Within that space the enumeration is exhaustive.
    """
    _require_globular(g, h)
    if len(g.strategies) != len(h.strategies):
        return None
    rows_g = _behaviour_rows(g)
    rows_h = _behaviour_rows(h)
    groups_g: dict = {}
    for s in g.strategies.elements:
        groups_g.setdefault(rows_g[s], []).append(s)
    groups_h: dict = {}
    for t in h.strategies.elements:
        groups_h.setdefault(rows_h[t], []).append(t)
    if set(groups_g) != set(groups_h):
        return None
    if any(len(groups_g[row]) != len(groups_h[row]) for row in groups_g):
        return None
    ordered_rows = []
    seen = set()
    for s in g.strategies.elements:
        row = rows_g[s]
        if row not in seen:
            seen.add(row)
            ordered_rows.append(row)
    guard(
        prod(factorial(len(groups_g[row])) for row in ordered_rows),
        "isomorphism candidates",
    )
    contexts = all_contexts(g)
    eg, eh = _equilibrium_tables(g, h, contexts)
    eg_sets = [frozenset(g.strategies.elements[i] for i in c) for c in eg]
    for assignment in itertools.product(
        *(itertools.permutations(groups_h[row]) for row in ordered_rows)
    ):
        mapping = {}
        for row, perm in zip(ordered_rows, assignment):
            mapping.update(zip(groups_g[row], perm))
        if all(
            frozenset(mapping[s] for s in eg_c) == eh_c
            for eg_c, eh_c in zip(eg_sets, eh)
        ):
            alpha = FnTable(g.strategies, h.strategies, mapping)
            return check_iso(g, h, alpha)
    return None


def sim_check(g: OpenGame, h: OpenGame, collect: bool = True) -> SimVerdict:
    """Do g and h have matching equilibrium behaviour in every context?

    Two equilibria match when they produce the same play value and the
    same coplay value against the continuation's answer to that play.
    Both directions are required; witnesses are recorded per context.
    """
    if g.dom != h.dom or g.cod != h.cod:
        raise TypeMismatch(f"cannot relate {g.dom} -> {g.cod} with {h.dom} -> {h.cod}")
    contexts = all_contexts(g)
    witnesses = []
    total_equilibria = 0
    for ctx in contexts:
        x, k = ctx.x, ctx.k
        eg_set = g.equilibrium_set(x, k)
        eh_set = h.equilibrium_set(x, k)
        eg = [s for s in g.strategies.elements if s in eg_set]
        eh = [t for t in h.strategies.elements if t in eh_set]
        total_equilibria += len(eg) + len(eh)
        for sigma in eg:
            y = g.play(sigma, x)
            ky = k(y)
            cg = g.coplay(sigma, x, ky)
            match = next(
                (
                    t
                    for t in eh
                    if h.play(t, x) == y and h.coplay(t, x, ky) == cg
                ),
                None,
            )
            if match is None:
                return SimVerdict(
                    False, [], (ctx, "left", sigma), len(contexts)
                )
            if collect:
                witnesses.append(SimWitness(ctx, sigma, match, y, cg))
        for tau in eh:
            y = h.play(tau, x)
            ky = k(y)
            ch = h.coplay(tau, x, ky)
            match = next(
                (
                    s
                    for s in eg
                    if g.play(s, x) == y and g.coplay(s, x, ky) == ch
                ),
                None,
            )
            if match is None:
                return SimVerdict(
                    False, [], (ctx, "right", tau), len(contexts)
                )
            if collect:
                witnesses.append(SimWitness(ctx, match, tau, y, ch))
    return SimVerdict(
        True,
        witnesses,
        None,
        len(contexts),
        vacuous=total_equilibria == 0 or len(contexts) == 0,
    )


def sim_equivalent(g: OpenGame, h: OpenGame) -> bool:
    return sim_check(g, h, collect=False).ok
