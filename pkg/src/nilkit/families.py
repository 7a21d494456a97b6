"""Small named presentations and random generators used by tests, demos and benchmarks."""
from __future__ import annotations

import random
from typing import Sequence

from .magnus import free_nilpotent
from .presentation import NilpotentPresentation

__all__ = ["heisenberg", "abelian", "free_nilpotent_mod", "random_class2", "random_element"]


def heisenberg(p: int | None = None) -> NilpotentPresentation:
    """``H_3`` with ``a2 a1 = a1 a2 a3^-1``; with ``p`` every basis element has order ``p``."""
    if p is None:
        return NilpotentPresentation([None] * 3, {(0, 1): {2: -1}})
    return NilpotentPresentation([p] * 3, {(0, 1): {2: -1}}, {0: {}, 1: {}, 2: {}})


def abelian(orders: Sequence[int | None]) -> NilpotentPresentation:
    """Direct product of cyclic groups (``None`` is infinite cyclic)."""
    return NilpotentPresentation(list(orders), {}, {i: {} for i, o in enumerate(orders) if o is not None})


def free_nilpotent_mod(r: int, c: int, p: int) -> NilpotentPresentation:
    """Free nilpotent group of rank ``r`` and class ``c`` with every basis element of order ``p``.

    Only consistent when ``p`` is large enough relative to ``c`` (e.g. ``p=3`` for class 3).
    """
    F = free_nilpotent(r, c).presentation()
    _, conj, _, levels, cc = F.relation_data()
    return NilpotentPresentation([p] * F.m, conj, {i: {} for i in range(F.m)}, levels, cc)


def random_class2(rng: random.Random, max_top: int = 3, max_centre: int = 2, max_torsion: int = 500,
                  tries: int = 1000) -> NilpotentPresentation:
    """Random consistent class-2 presentation mixing finite and infinite orders.

    The product of the finite relative orders stays below ``max_torsion``,
    which bounds the order of the torsion subgroup.
    """
    choices = (None, None, 2, 3, 4, 6)
    for _ in range(tries):
        k = rng.randint(1, max_top)
        l = rng.randint(1, max_centre)
        m = k + l
        orders = [rng.choice(choices) for _ in range(m)]
        prod = 1
        for o in orders:
            prod *= o or 1
        if prod > max_torsion:
            continue

        def tail(start):
            return {t: rng.randint(-2, 2) for t in range(max(start, k), m) if rng.random() < 0.6}

        conj = {(i, j): tail(k) for i in range(k) for j in range(i + 1, k)}
        conj = {key: t for key, t in conj.items() if any(t.values())}
        powers = {i: (tail(k) if i < k else tail(i + 1)) for i in range(m) if orders[i] is not None}
        levels = [1] * k + [2] * l
        try:
            P = NilpotentPresentation(orders, conj, powers, levels, 2)
        except ValueError:
            continue
        if P.check_consistency():
            return P
    raise RuntimeError("no consistent presentation found")


def random_element(P: NilpotentPresentation, rng: random.Random, bound: int = 5) -> tuple[int, ...]:
    """Random canonical element; infinite coordinates drawn from ``[-bound, bound]``."""
    return P.canonical([rng.randrange(o) if o is not None else rng.randint(-bound, bound) for o in P.orders])
