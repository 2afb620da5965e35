"""Finite carriers and total-function tables.

Everything downstream is decided by exhaustive enumeration over small named
finite sets, so the primitives here are deliberately plain: a set is an
ordered tuple of opaque atoms (an atom is a string label or a tuple of
atoms), a function is a materialized lookup table, and every enumerator
counts its output against a global size cap before yielding anything.

Values are immutable after construction and all operations are pure, so
they can be shared freely between threads or workers.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, Sequence

from .errors import SizeGuardExceeded, TypeMismatch

DEFAULT_SIZE_CAP = 10**6
SIZE_CAP_ENV = "OPENGAMES_SIZE_CAP"

_size_cap = int(os.environ.get(SIZE_CAP_ENV, DEFAULT_SIZE_CAP))


def size_cap() -> int:
    return _size_cap


def set_size_cap(cap: int) -> None:
    """Set the global enumeration cap (items per enumerator call)."""
    global _size_cap
    if cap < 1:
        raise ValueError("size cap must be positive")
    _size_cap = cap


def guard(count: int, what: str) -> int:
    """Fail loudly if an enumeration would produce more than the cap."""
    if count > _size_cap:
        raise SizeGuardExceeded(what, count, _size_cap)
    return count


def atom_label(value) -> str:
    """Render an atom (label or tuple of atoms) as deterministic text."""
    if isinstance(value, tuple):
        return "(" + ",".join(atom_label(v) for v in value) + ")"
    return str(value)


@dataclass(frozen=True)
class FiniteSet:
    """A named carrier with a fixed element order.

    Element order is declaration order and is semantically meaningful: it
    fixes enumeration order everywhere and, for payoff sets, the total
    order used by argmax.
    """

    name: str
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise ValueError(f"duplicate elements in set {self.name!r}")

    @cached_property
    def _index(self) -> dict:
        return {x: i for i, x in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._index

    def index(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise TypeMismatch(f"{atom_label(x)} is not an element of {self.name}")

    def __repr__(self):
        return f"FiniteSet({self.name!r}, {self.elements!r})"

    def __str__(self):
        return self.name


#: The singleton carrier; its only atom is the unit label "*".
STAR = "*"
UNIT = FiniteSet("1", (STAR,))


def product(a: FiniteSet, b: FiniteSet) -> FiniteSet:
    """Binary product carrier; elements are pairs in lexicographic order."""
    elems = tuple((x, y) for x in a.elements for y in b.elements)
    return FiniteSet(f"({a.name}*{b.name})", elems)


def product_all(sets: Sequence[FiniteSet], name: str | None = None) -> FiniteSet:
    """N-ary product with flat tuples; the empty product is {()}.

    Used for the value sets of multi-wire boundaries, where a value is one
    atom per wire.
    """
    elems = tuple(itertools.product(*(s.elements for s in sets)))
    if name is None:
        name = "(" + "*".join(s.name for s in sets) + ")" if sets else "()"
    return FiniteSet(name, elems)


class FnTable:
    """A total function between finite sets, stored extensionally.

    Equality is pointwise: two tables are equal exactly when they have the
    same typed domain and codomain and the same image at every element.
    Tables are immutable and hashable, so they can serve as strategies,
    continuations, and memoization keys.
    """

    __slots__ = ("domain", "codomain", "_images", "_hash")

    def __init__(self, domain: FiniteSet, codomain: FiniteSet, mapping):
        self.domain = domain
        self.codomain = codomain
        if callable(mapping):
            images = tuple(mapping(x) for x in domain.elements)
        elif isinstance(mapping, dict):
            if len(mapping) != len(domain):
                missing = [x for x in domain.elements if x not in mapping]
                raise TypeMismatch(
                    f"table {domain.name} -> {codomain.name} is not total; "
                    f"missing {[atom_label(m) for m in missing][:3]}"
                )
            images = tuple(mapping[x] for x in domain.elements)
        else:
            images = tuple(mapping)
            if len(images) != len(domain):
                raise TypeMismatch(
                    f"need {len(domain)} images for {domain.name}, got {len(images)}"
                )
        for y in images:
            if y not in codomain:
                raise TypeMismatch(
                    f"image {atom_label(y)} is not in codomain {codomain.name}"
                )
        self._images = images
        self._hash = None

    @classmethod
    def _unchecked(cls, domain: FiniteSet, codomain: FiniteSet, images: tuple):
        # Internal fast path for tables whose images are valid by
        # construction (engine-derived continuations and enumerators).
        table = cls.__new__(cls)
        table.domain = domain
        table.codomain = codomain
        table._images = images
        table._hash = None
        return table

    def __call__(self, x):
        try:
            return self._images[self.domain._index[x]]
        except KeyError:
            raise TypeMismatch(
                f"{atom_label(x)} is not an element of {self.domain.name}"
            )

    @property
    def images(self) -> tuple:
        return self._images

    def items(self):
        return zip(self.domain.elements, self._images)

    def __eq__(self, other):
        if not isinstance(other, FnTable):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and self._images == other._images
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.domain, self.codomain, self._images))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{atom_label(x)}->{atom_label(y)}" for x, y in self.items())
        return f"{{{body}}} : {self.domain.name} -> {self.codomain.name}"


@dataclass(frozen=True)
class SubsetTable:
    """A subset of a carrier, kept in carrier order."""

    carrier: FiniteSet
    members: tuple

    def __post_init__(self):
        mset = set(self.members)
        if len(mset) != len(self.members):
            raise ValueError("duplicate members in subset")
        for m in self.members:
            if m not in self.carrier:
                raise TypeMismatch(
                    f"{atom_label(m)} is not in carrier {self.carrier.name}"
                )
        ordered = tuple(x for x in self.carrier.elements if x in mset)
        object.__setattr__(self, "members", ordered)

    @cached_property
    def _mset(self) -> frozenset:
        return frozenset(self.members)

    def __contains__(self, x) -> bool:
        return x in self._mset

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator:
        return iter(self.members)

    def __str__(self):
        return "{" + ", ".join(atom_label(m) for m in self.members) + "}"


def count_functions(a: FiniteSet, b: FiniteSet) -> int:
    return len(b) ** len(a)


def enumerate_functions(a: FiniteSet, b: FiniteSet) -> list[FnTable]:
    """All |b|^|a| total functions a -> b, in lexicographic image order.

    The empty domain yields exactly one (empty) table; a nonempty domain
    with an empty codomain yields none.
    """
    guard(count_functions(a, b), f"functions {a.name} -> {b.name}")
    return [
        FnTable._unchecked(a, b, images)
        for images in itertools.product(b.elements, repeat=len(a))
    ]


def identity_fn(a: FiniteSet) -> FnTable:
    return FnTable(a, a, tuple(a.elements))


def compose_fn(f: FnTable, g: FnTable) -> FnTable:
    """Pointwise composite g . f (apply f first)."""
    if f.codomain != g.domain:
        raise TypeMismatch(
            f"cannot compose {f.domain.name} -> {f.codomain.name} "
            f"with {g.domain.name} -> {g.codomain.name}"
        )
    return FnTable(f.domain, g.codomain, tuple(g(y) for y in f.images))


def pair_fn(f: FnTable, g: FnTable) -> FnTable:
    """<f, g> : A -> B x C from f : A -> B and g : A -> C."""
    if f.domain != g.domain:
        raise TypeMismatch("pair_fn needs a shared domain")
    cod = product(f.codomain, g.codomain)
    return FnTable(f.domain, cod, tuple(zip(f.images, g.images)))


def proj1(a: FiniteSet, b: FiniteSet) -> FnTable:
    p = product(a, b)
    return FnTable(p, a, tuple(x for x, _ in p.elements))


def proj2(a: FiniteSet, b: FiniteSet) -> FnTable:
    p = product(a, b)
    return FnTable(p, b, tuple(y for _, y in p.elements))


def diagonal(a: FiniteSet) -> FnTable:
    """The copying map a -> a x a, x |-> (x, x)."""
    return FnTable(a, product(a, a), tuple((x, x) for x in a.elements))


def terminal(a: FiniteSet) -> FnTable:
    """The unique deleting map a -> 1."""
    return FnTable(a, UNIT, tuple(STAR for _ in a.elements))


def constant_fn(a: FiniteSet, b: FiniteSet, value) -> FnTable:
    if value not in b:
        raise TypeMismatch(f"{atom_label(value)} is not in {b.name}")
    return FnTable(a, b, tuple(value for _ in a.elements))


def fn_from_callable(a: FiniteSet, b: FiniteSet, fn: Callable) -> FnTable:
    return FnTable(a, b, fn)
