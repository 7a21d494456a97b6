"""Exhaustive reference answers over finite nilpotent groups.

Everything here is deliberately naive: elements are enumerated, subgroups are
closed by breadth-first search and every question is answered by checking the
defining predicate on all candidates. Tests and ``nilkit --check`` use these as
ground truth.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from typing import Iterable, Sequence

from .presentation import NilpotentPresentation

__all__ = [
    "CapExceededError",
    "FiniteGroupTable",
    "enumerate_group",
    "brute_closure",
    "brute_membership",
    "brute_conjugacy",
    "brute_centralizer",
    "brute_normalizer",
    "brute_subgroup_conjugacy",
    "brute_coset_intersection",
    "brute_torsion",
    "brute_isolator",
    "has_finite_order",
    "box_torsion",
    "closure",
]

DEFAULT_CAP = 10 ** 4

Elt = tuple


class CapExceededError(ValueError):
    """The group is infinite or larger than the enumeration cap."""


class FiniteGroupTable:
    """All elements of a finite group with memoised multiplication."""

    def __init__(self, P: NilpotentPresentation, cap: int = DEFAULT_CAP):
        if any(o is None for o in P.orders):
            raise CapExceededError("presentation has generators of infinite order")
        n = math.prod(P.orders)
        if n > cap:
            raise CapExceededError(f"group order {n} exceeds cap {cap}")
        self.P = P
        self.elements: list[Elt] = [tuple(v) for v in itertools.product(*(range(o) for o in P.orders))]
        self.index = {g: i for i, g in enumerate(self.elements)}
        self._mul: dict[tuple[Elt, Elt], Elt] = {}
        self._verify()

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Elt:
        return self.P.identity

    def _verify(self):
        # right multiplication by each generator must permute the elements
        for i in range(self.P.m):
            a = self.P.generator(i)
            img = {self.mul(g, a) for g in self.elements}
            if len(img) != self.order or not img <= self.index.keys():
                raise AssertionError("enumerated table is not closed")

    def mul(self, x: Elt, y: Elt) -> Elt:
        key = (x, y)
        r = self._mul.get(key)
        if r is None:
            r = self.P.multiply(x, y)
            self._mul[key] = r
        return r

    def inv(self, x: Elt) -> Elt:
        return self.P.inverse(x)

    def conj(self, x: Elt, g: Elt) -> Elt:
        return self.mul(self.inv(g), self.mul(x, g))

    def power(self, x: Elt, n: int) -> Elt:
        return self.P.power(x, n)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return self.order


def enumerate_group(P: NilpotentPresentation, cap: int = DEFAULT_CAP) -> FiniteGroupTable:
    return FiniteGroupTable(P, cap)


def brute_closure(T: FiniteGroupTable, gens: Iterable[Sequence[int]]) -> frozenset:
    """Subgroup generated by ``gens`` (finite, so closing under products is enough)."""
    gens = [T.P.canonical(g) for g in gens]
    seen = {T.identity}
    todo = deque([T.identity])
    while todo:
        x = todo.popleft()
        for g in gens:
            y = T.mul(x, g)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


def brute_membership(T: FiniteGroupTable, H: frozenset, g: Sequence[int]) -> bool:
    return T.P.canonical(g) in H


def brute_conjugacy(T: FiniteGroupTable, A: Sequence, B: Sequence) -> frozenset:
    """All ``x`` with ``a_i^x = b_i`` for every ``i``."""
    A = [T.P.canonical(a) for a in A]
    B = [T.P.canonical(b) for b in B]
    return frozenset(x for x in T if all(T.conj(a, x) == b for a, b in zip(A, B)))


def brute_centralizer(T: FiniteGroupTable, gens: Sequence) -> frozenset:
    return brute_conjugacy(T, gens, gens)


def _conj_set(T: FiniteGroupTable, H: frozenset, g: Elt) -> frozenset:
    return frozenset(T.conj(h, g) for h in H)


def brute_subgroup_conjugacy(T: FiniteGroupTable, H: frozenset, K: frozenset) -> frozenset:
    """All ``g`` with ``H^g = K``."""
    if len(H) != len(K):
        return frozenset()
    return frozenset(g for g in T if _conj_set(T, H, g) == K)


def brute_normalizer(T: FiniteGroupTable, K: frozenset) -> frozenset:
    return brute_subgroup_conjugacy(T, K, K)


def brute_coset_intersection(T: FiniteGroupTable, g1, H: frozenset, g2, K: frozenset) -> frozenset:
    g1, g2 = T.P.canonical(g1), T.P.canonical(g2)
    left = {T.mul(g1, h) for h in H}
    return frozenset(T.mul(g2, k) for k in K if T.mul(g2, k) in left)


def brute_torsion(T: FiniteGroupTable) -> frozenset:
    return frozenset(g for g in T if has_finite_order(T.P, g, T.order))


def brute_isolator(T: FiniteGroupTable, H: frozenset) -> frozenset:
    """``{g : g^n in H for some 1 <= n <= |G|}``."""
    out = set()
    for g in T:
        x = T.identity
        for _ in range(T.order):
            x = T.mul(x, g)
            if x in H:
                out.add(g)
                break
    return frozenset(out)


def has_finite_order(P: NilpotentPresentation, g: Sequence[int], bound: int) -> bool:
    """Whether ``g`` has order at most ``bound``."""
    L = math.lcm(*range(1, bound + 1))
    return not any(P.power(g, L))


def box_torsion(P: NilpotentPresentation, radius: Sequence[int], exponent: int | None = None) -> frozenset:
    """Elements ``g`` with ``g^exponent = 1`` whose infinite coordinates satisfy ``|x_i| <= radius[i]``.

    The default exponent is the product of the finite relative orders: the
    torsion subgroup's order divides it, so every torsion element qualifies.
    """
    if exponent is None:
        exponent = math.prod(o for o in P.orders if o is not None)
    ranges = [range(o) if o is not None else range(-radius[i], radius[i] + 1)
              for i, o in enumerate(P.orders)]
    return frozenset(tuple(v) for v in itertools.product(*ranges) if not any(P.power(v, exponent)))


def closure(P: NilpotentPresentation, gens: Iterable[Sequence[int]], cap: int = DEFAULT_CAP) -> frozenset:
    """Finite subgroup generated by finite-order ``gens`` in any presentation."""
    gens = [P.canonical(g) for g in gens]
    seen = {P.identity}
    todo = deque([P.identity])
    while todo:
        x = todo.popleft()
        for g in gens:
            y = P.multiply(x, g)
            if y not in seen:
                if len(seen) >= cap:
                    raise CapExceededError("generated subgroup exceeds the cap")
                seen.add(y)
                todo.append(y)
    return frozenset(seen)
