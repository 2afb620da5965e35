"""Bounded search for a failure of compositionality of the behaviour
relation: composable pairs that are equivalent factor-wise but whose
composites are not.

The candidate space is the generator-grammar pool of `grammar` at the
requested depth and carrier size (including its caps, which are part of
the space definition). Within a boundary bucket, terms are grouped into
behaviour-equivalence classes; for each composable pair of classes the
composites of all member pairs must land in a single behaviour class,
and the first violation yields a quadruple. Every returned quadruple is
re-verified from scratch before being reported. Exhaustion means the
entire declared space was checked without a violation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import OpenGame, compose
from .finset import FiniteSet
from .grammar import PoolEntry, PoolLimits, Term, enumerate_pool, term_text
from .morphisms import sim_check, sim_equivalent


@dataclass(frozen=True)
class Counterexample:
    """A verified witness that the behaviour relation is not compositional."""

    g: Term
    g_prime: Term
    h: Term
    h_prime: Term

    def as_dict(self) -> dict:
        return {
            "g": term_text(self.g),
            "g_prime": term_text(self.g_prime),
            "h": term_text(self.h),
            "h_prime": term_text(self.h_prime),
        }


@dataclass
class SearchOutcome:
    found: Counterexample | None
    verified: bool
    stats: dict

    @property
    def status(self) -> str:
        return "found" if self.found is not None else "exhausted"


def _verify(pool_games: dict, cex: Counterexample) -> bool:
    g, gp = pool_games[cex.g], pool_games[cex.g_prime]
    h, hp = pool_games[cex.h], pool_games[cex.h_prime]
    return (
        sim_check(g, gp, collect=False).ok
        and sim_check(h, hp, collect=False).ok
        and not sim_check(compose(g, h), compose(gp, hp), collect=False).ok
    )


def _behaviour_classes(entries: list[PoolEntry]) -> list[list[PoolEntry]]:
    """Partition one bucket into behaviour-equivalence classes.

    The relation is transitive, so comparing against one representative
    per class is enough.
    """
    classes: list[list[PoolEntry]] = []
    for entry in entries:
        for cls in classes:
            if sim_equivalent(entry.game, cls[0].game):
                cls.append(entry)
                break
        else:
            classes.append([entry])
    return classes


def sim_compositionality_search(
    max_depth: int,
    set_size: int,
    limits: PoolLimits = PoolLimits(),
    with_agents: bool = True,
) -> SearchOutcome:
    """Search the bounded grammar space for a compositionality failure.

    Returns either a re-verified counterexample quadruple or an
    exhaustion record describing the space that was covered. The outcome
    is deterministic: enumeration and checking follow construction
    order throughout.
    """
    carrier = FiniteSet("A", tuple(f"a{i}" for i in range(set_size)))
    pool = enumerate_pool(carrier, max_depth, limits, with_agents)
    pool_games = {entry.term: entry.game for entry in pool}
    buckets: dict = {}
    for entry in pool:
        buckets.setdefault((entry.game.dom, entry.game.cod), []).append(entry)
    bucket_list = list(buckets.items())
    classes_per_bucket = {}
    n_classes = 0
    for key, entries in bucket_list:
        cls = _behaviour_classes(entries)
        classes_per_bucket[key] = cls
        n_classes += len(cls)
    stats = {
        "carrier_size": set_size,
        "depth": max_depth,
        "terms": len(pool),
        "buckets": len(bucket_list),
        "classes": n_classes,
        "composite_checks": 0,
        "limits": {
            "max_wires": limits.max_wires,
            "max_sigma": limits.max_sigma,
            "max_contexts": limits.max_contexts,
            "max_chain": limits.max_chain,
            "max_pool": limits.max_pool,
        },
    }
    checks = 0
    for (dom1, mid1), left_entries in bucket_list:
        for (mid2, cod2), right_entries in bucket_list:
            if mid1 != mid2:
                continue
            left_classes = classes_per_bucket[(dom1, mid1)]
            right_classes = classes_per_bucket[(mid2, cod2)]
            for c1 in left_classes:
                for c2 in right_classes:
                    if len(c1) == 1 and len(c2) == 1:
                        continue
                    # All composites of one class pair must stay in a
                    # single behaviour class; compare against the first.
                    rep = None
                    rep_pair = None
                    for le in c1:
                        for re_ in c2:
                            composite = compose(le.game, re_.game)
                            if rep is None:
                                rep = composite
                                rep_pair = (le, re_)
                                continue
                            checks += 1
                            if not sim_equivalent(rep, composite):
                                stats["composite_checks"] = checks
                                cex = Counterexample(
                                    rep_pair[0].term,
                                    le.term,
                                    rep_pair[1].term,
                                    re_.term,
                                )
                                return SearchOutcome(
                                    cex, _verify(pool_games, cex), stats
                                )
    stats["composite_checks"] = checks
    return SearchOutcome(None, False, stats)
